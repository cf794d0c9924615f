#include <gtest/gtest.h>

#include "support.hpp"

using namespace neuromap;
using namespace neuromap::testing;

TEST(Validate, EmptyGraphIsValid) { EXPECT_TRUE(validate(SnnGraph{}).empty()); }

TEST(Validate, UnknownEndpointNamesTheSynapse) {
  SnnGraph g;
  g.add_neuron("a", 1);
  g.synapses.push_back({0, 7, 1e-5});
  const auto v = validate(g);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0].rule, "unknown-endpoint");
  EXPECT_NE(v[0].message.find("synapse 0"), std::string::npos);
}

TEST(Validate, ZeroWeightIsOnePositivityViolation) {
  SnnGraph g = two_input_net();
  g.synapses[1].weight = 0.0;
  const auto v = validate(g);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0].rule, "non-positive-weight");
}

TEST(Validate, DuplicatePairAndDuplicateName) {
  SnnGraph g = two_input_net();
  g.add_synapse(0, 2, 1e-5);
  g.add_neuron("in0", 0);
  const auto v = validate(g);
  ASSERT_EQ(v.size(), 2U);
  EXPECT_EQ(v[0].rule, "duplicate-neuron");
  EXPECT_EQ(v[1].rule, "duplicate-synapse");
}

TEST(ClusterStats, TwoInputNetAsOneCluster) {
  const SnnGraph g = two_input_net();
  const auto c = single_cluster(g);
  const auto st = derive_cluster_stats(c.clusters[0], g);
  EXPECT_EQ(st.spikes, 10U);
  EXPECT_EQ(st.in, 2U);
  EXPECT_EQ(st.out, 1U);
}

TEST(ClusterStats, SilentAndSingle) {
  SnnGraph silent;
  silent.add_neuron("a", 0);
  silent.add_neuron("b", 0);
  silent.add_synapse(0, 1, 1e-5);
  EXPECT_EQ(derive_cluster_stats(single_cluster(silent).clusters[0], silent).spikes, 0U);

  SnnGraph one;
  one.add_neuron("x", 7);
  EXPECT_EQ(derive_cluster_stats(single_cluster(one).clusters[0], one).spikes, 7U);
}

TEST(ClusterStats, UnknownNeuronThrows) {
  const SnnGraph g = two_input_net();
  Cluster c;
  c.members = {0, 9};
  EXPECT_THROW(derive_cluster_stats(c, g), Error);
}

TEST(BuildClustered, LinksSumSourceSpikesPerSynapse) {
  // a -> c, b -> c, a -> d; {a, b} in cluster 0, {c, d} in cluster 1.
  SnnGraph g;
  g.add_neuron("a", 4);
  g.add_neuron("b", 6);
  g.add_neuron("c", 1);
  g.add_neuron("d", 1);
  g.add_synapse(0, 2, 1e-5);
  g.add_synapse(1, 2, 1e-5);
  g.add_synapse(0, 3, 1e-5);
  const auto c = build_clustered(g, {0, 0, 1, 1}, 2);
  ASSERT_EQ(c.links.size(), 1U);
  EXPECT_EQ(c.links[0], (InterClusterLink{0, 1, 14}));
  EXPECT_TRUE(c.clusters[0].synapses.empty());
  EXPECT_EQ(c.clusters[1].pre_neurons, (std::vector<NeuronId>{0, 1}));
  EXPECT_EQ(c.clusters[1].post_neurons, (std::vector<NeuronId>{2, 3}));
}

TEST(BuildClustered, InvariantsOnRandomPartitions) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto c = random_instance(1 + seed % 6, seed);
    std::set<std::pair<ClusterId, ClusterId>> seen;
    for (const auto& l : c.links) {
      EXPECT_NE(l.src, l.dst);
      EXPECT_LT(l.src, c.clusters.size());
      EXPECT_LT(l.dst, c.clusters.size());
      EXPECT_TRUE(seen.emplace(l.src, l.dst).second);
    }
    for (const auto& cl : c.clusters) {
      for (const auto& s : cl.synapses) {
        EXPECT_LT(s.pre, cl.pre_neurons.size());
        EXPECT_LT(s.post, cl.post_neurons.size());
      }
    }
  }
}

TEST(Hardware, DefaultsAndIndexing) {
  const HardwareModel hw = mesh(3, 2);
  EXPECT_NO_THROW(hw.validate());
  EXPECT_EQ(hw.tile_count(), 6U);
  for (std::size_t i = 0; i < hw.tile_count(); ++i) EXPECT_EQ(hw.tile_index(hw.tile_at(i)), i);
  EXPECT_FALSE(hw.contains({3, 0}));
  HardwareModel bad;
  bad.bandwidth = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = HardwareModel{};
  bad.r_par = -1.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Mapping, MatrixRoundTrip) {
  const HardwareModel hw = mesh(3, 3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Xoshiro256 rng(seed);
    const auto k = static_cast<std::uint32_t>(1 + rng.below(9));
    Mapping m;
    for (auto t : sample_without_replacement(rng, 9, k)) m.tile_of.push_back(hw.tile_at(t));
    const auto mat = to_matrix(m, hw);
    for (const auto& row : mat) EXPECT_EQ(std::count(row.begin(), row.end(), 1), 1);
    EXPECT_EQ(from_matrix(mat, hw), m);
  }
}

TEST(Mapping, RejectsSharedTilesAndBadRows) {
  const HardwareModel hw = mesh(2, 2);
  EXPECT_THROW(check_mapping(Mapping{{{0, 0}, {0, 0}}}, 2, hw), Error);
  EXPECT_THROW(check_mapping(Mapping{{{2, 0}}}, 1, hw), Error);
  EXPECT_THROW(check_mapping(Mapping{{{0, 0}}}, 2, hw), Error);
  EXPECT_THROW(from_matrix({{1, 1, 0, 0}}, hw), Error);
  EXPECT_THROW(from_matrix({{0, 0, 0, 0}}, hw), Error);
}

TEST(Placement, RandomPlacementsAreValidAndCellsInjective) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = random_instance(2, seed, 5, 0.5);
    Xoshiro256 rng(seed);
    for (const auto& cl : c.clusters) {
      const auto p = random_placement(cl, 16, rng);
      EXPECT_TRUE(is_valid_placement(cl, p, 16));
      std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
      for (const auto& s : cl.synapses) {
        EXPECT_TRUE(cells.emplace(p.row_of[s.pre], p.col_of[s.post]).second);
      }
    }
  }
}

TEST(Placement, InvalidPlacementsDetected) {
  const auto c = single_cluster(two_input_net());
  EXPECT_FALSE(is_valid_placement(c.clusters[0], {{1, 1}, {0}}, 4));
  EXPECT_FALSE(is_valid_placement(c.clusters[0], {{1, 4}, {0}}, 4));
  EXPECT_FALSE(is_valid_placement(c.clusters[0], {{1}, {0}}, 4));
  EXPECT_TRUE(is_valid_placement(c.clusters[0], {{1, 0}, {3}}, 4));
}

TEST(EnergyReport, TotalIsExactSumOfComponents) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = random_instance(4, seed);
    const HardwareModel hw = mesh(2, 2);
    Mapping m;
    for (std::size_t i = 0; i < 4; ++i) m.tile_of.push_back(hw.tile_at(i));
    const auto r = total_energy(c, m, assign_all(c, hw.crossbar_dim), hw);
    EXPECT_EQ(r.total, r.e_spk_total + r.e_comm_total);
    double spk = 0.0;
    for (double e : r.per_cluster_spk) spk += e;
    double comm = 0.0;
    for (double e : r.per_link_comm) comm += e;
    EXPECT_EQ(spk, r.e_spk_total);
    EXPECT_EQ(comm, r.e_comm_total);
  }
}
