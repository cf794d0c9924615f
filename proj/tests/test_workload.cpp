#include <gtest/gtest.h>

#include "support.hpp"

using namespace neuromap;
using namespace neuromap::testing;

namespace {

const char* kTwoInput = R"({
  "version": 1,
  "neurons": ["in0", "in1", "out"],
  "synapses": [{"src": "in0", "dst": "out", "weight": 6.6e-5},
               {"src": "in1", "dst": "out", "weight": 5e-5}],
  "spikes": {"in0": 5, "in1": 3, "out": 2}
})";

std::string parse_error(std::string_view text) {
  try {
    parse_snn(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseSnn, TwoInputDocument) {
  const auto g = parse_snn(kTwoInput);
  EXPECT_EQ(g.neuron_count(), 3U);
  EXPECT_EQ(g.synapses.size(), 2U);
  EXPECT_EQ(g.spikes, (std::vector<SpikeCount>{5, 3, 2}));
  EXPECT_EQ(g.synapses[1], (Synapse{1, 2, 5e-5}));
}

TEST(ParseSnn, EmptyDocument) {
  const auto g = parse_snn(R"({"version": 1, "neurons": [], "synapses": []})");
  EXPECT_EQ(g, SnnGraph{});
}

TEST(ParseSnn, MissingNeuronNamesSynapseIndex) {
  const auto msg = parse_error(
      R"({"version": 1, "neurons": ["a"], "synapses": [{"src": "a", "dst": "a", "weight": 1e-5},
          {"src": "a", "dst": "zz", "weight": 1e-5}]})");
  EXPECT_NE(msg.find("synapses[1].dst"), std::string::npos) << msg;
  EXPECT_NE(msg.find("zz"), std::string::npos) << msg;
}

TEST(ParseSnn, RejectsMalformedAndInvalid) {
  EXPECT_NE(parse_error("{"), "");
  EXPECT_NE(parse_error("[]"), "");
  EXPECT_NE(parse_error(R"({"neurons": []})").find("version"), std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 2})").find("version 2"), std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a", "a"]})").find("neurons[1]"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a","b"], "synapses":
      [{"src": "a", "dst": "b", "weight": 0}]})").find("non-positive-weight"), std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a","b"], "synapses":
      [{"src": "a", "dst": "b", "weight": 1e-5}, {"src": "a", "dst": "b", "weight": 2e-5}]})")
                .find("duplicate-synapse"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a"], "spikes": {"a": -1}})").find("spikes.a"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a"], "spikes": {"b": 1}})").find("spikes.b"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "neurons": ["a"], "synapses": [{"src": "a", "dst": "a"}]})")
                .find("synapses[0].weight"),
            std::string::npos);
}

TEST(ParseSnn, NegativeWeightKeptByMagnitudeWithWarning) {
  std::vector<std::string> warnings;
  const auto g = parse_snn(R"({"version": 1, "neurons": ["a","b"], "synapses":
      [{"src": "a", "dst": "b", "weight": -3e-5}]})",
                           &warnings);
  EXPECT_EQ(g.synapses[0].weight, 3e-5);
  ASSERT_EQ(warnings.size(), 1U);
  EXPECT_NE(warnings[0].find("synapses[0]"), std::string::npos);
}

TEST(ParseSnn, FractionalSpikesRoundHalfUp) {
  const auto g = parse_snn(
      R"({"version": 1, "neurons": ["a","b","c","d"], "spikes": {"a": 2.5, "b": 2.49, "c": 0.5}})");
  EXPECT_EQ(g.spikes, (std::vector<SpikeCount>{3, 2, 1, 0}));
}

TEST(Serialize, RoundTripOnGeneratedGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SnnGraph g = random_graph(12, 0.25, seed);
    EXPECT_EQ(parse_snn(serialize_snn(g)), g);
  }
  const SnnGraph two = parse_snn(kTwoInput);
  EXPECT_EQ(parse_snn(serialize_snn(two)), two);
  EXPECT_EQ(parse_snn(serialize_snn(SnnGraph{})), SnnGraph{});
}

TEST(Generate, FeedforwardCounts) {
  WorkloadSpec spec;
  spec.layers = {4, 2, 1};
  spec.seed = 1;
  const auto g = generate(spec);
  EXPECT_EQ(g.neuron_count(), 7U);
  EXPECT_EQ(g.synapses.size(), 10U);
  EXPECT_TRUE(validate(g).empty());
}

TEST(Generate, DenseReservoirHasAllOrderedPairs) {
  WorkloadSpec spec;
  spec.kind = WorkloadKind::reservoir;
  spec.n = 10;
  spec.density = 1.0;
  const auto g = generate(spec);
  EXPECT_EQ(g.synapses.size(), 90U);
  for (const auto& s : g.synapses) EXPECT_NE(s.src, s.dst);
}

TEST(Generate, DeterministicPerSeed) {
  WorkloadSpec spec;
  spec.kind = WorkloadKind::reservoir;
  spec.n = 40;
  spec.density = 0.2;
  spec.seed = 99;
  EXPECT_EQ(generate(spec), generate(spec));
  WorkloadSpec other = spec;
  other.seed = 100;
  EXPECT_NE(generate(spec), generate(other));
}

TEST(Generate, SparseAndLocalFanIn) {
  WorkloadSpec spec;
  spec.layers = {32, 16, 8};
  spec.fan_in = 5;
  for (auto conn : {Connectivity::sparse, Connectivity::local}) {
    spec.connectivity = conn;
    const auto g = generate(spec);
    EXPECT_TRUE(validate(g).empty());
    const auto fan_in = g.fan_in();
    for (std::size_t n = 32; n < g.neuron_count(); ++n) EXPECT_EQ(fan_in[n], 5U);
  }
}

TEST(Generate, SpikesAndWeightsWithinRange) {
  WorkloadSpec spec;
  spec.kind = WorkloadKind::random;
  spec.n = 50;
  spec.density = 0.3;
  spec.spike_min = 2;
  spec.spike_max = 9;
  const auto g = generate(spec);
  for (auto s : g.spikes) {
    EXPECT_GE(s, 2U);
    EXPECT_LE(s, 9U);
  }
  for (const auto& s : g.synapses) {
    EXPECT_LT(s.src, s.dst);
    EXPECT_GE(s.weight, spec.weight_min);
    EXPECT_LE(s.weight, spec.weight_max);
  }
}

TEST(Generate, InvalidSpecsRejected) {
  WorkloadSpec spec;
  spec.layers = {3, 0};
  EXPECT_THROW(generate(spec), Error);
  spec = WorkloadSpec{};
  spec.kind = WorkloadKind::reservoir;
  spec.density = 0.0;
  EXPECT_THROW(generate(spec), Error);
  spec.density = 1.5;
  EXPECT_THROW(generate(spec), Error);
  spec = WorkloadSpec{};
  spec.connectivity = Connectivity::sparse;
  EXPECT_THROW(generate(spec), Error);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/neuromap/w.json"), IoError);
  EXPECT_THROW(load_snn("/nonexistent/neuromap/w.json"), IoError);
}
