#pragma once

// Shared fixtures for the unit tests and the acceptance runner.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "neuromap/neuromap.hpp"

namespace neuromap::testing {

// Two inputs (5 and 3 spikes) driving one output neuron (2 spikes).
inline SnnGraph two_input_net(double w1 = 66e-6, double w2 = 50e-6) {
  SnnGraph g;
  const auto a = g.add_neuron("in0", 5);
  const auto b = g.add_neuron("in1", 3);
  const auto p = g.add_neuron("out", 2);
  g.add_synapse(a, p, w1);
  g.add_synapse(b, p, w2);
  return g;
}

inline ClusteredSnn single_cluster(const SnnGraph& g) {
  return build_clustered(g, std::vector<ClusterId>(g.neuron_count(), 0), 1);
}

// Three clusters A, B, C with links A->B (3), B->C (3), C->A (2); no synapses.
inline ClusteredSnn triangle_links() {
  ClusteredSnn c;
  c.clusters.resize(3);
  for (ClusterId i = 0; i < 3; ++i) c.clusters[i].id = i;
  c.links = {{0, 1, 3}, {1, 2, 3}, {2, 0, 2}};
  return c;
}

// Random graph with `n` neurons, each ordered pair (no self-loops) present
// with probability `density`.
inline SnnGraph random_graph(std::size_t n, double density, std::uint64_t seed,
                             SpikeCount spike_max = 20) {
  WorkloadSpec spec;
  spec.kind = WorkloadKind::reservoir;
  spec.n = n;
  spec.density = density;
  spec.spike_max = spike_max;
  spec.seed = seed;
  return generate(spec);
}

// Random clustered instance: `clusters` clusters built from a random graph
// whose neurons are dealt round-robin after a seeded shuffle, so every
// cluster is non-empty.
inline ClusteredSnn random_instance(std::size_t clusters, std::uint64_t seed,
                                    std::size_t per_cluster = 3, double density = 0.3) {
  const SnnGraph g = random_graph(clusters * per_cluster, density, seed);
  Xoshiro256 rng(seed ^ 0x5bd1e995ULL);
  const auto order = sample_without_replacement(rng, static_cast<std::uint32_t>(g.neuron_count()),
                                                static_cast<std::uint32_t>(g.neuron_count()));
  std::vector<ClusterId> label(g.neuron_count());
  for (std::size_t i = 0; i < order.size(); ++i) label[order[i]] = static_cast<ClusterId>(i % clusters);
  return build_clustered(g, label, clusters);
}

inline HardwareModel mesh(std::int32_t w, std::int32_t h) {
  HardwareModel hw;
  hw.mesh_width = w;
  hw.mesh_height = h;
  return hw;
}

// Every synapse carries its source's spikes once.
inline SpikeCount traversals(const SnnGraph& g) {
  SpikeCount t = 0;
  for (const auto& s : g.synapses) t += g.spikes[s.src];
  return t;
}

}  // namespace neuromap::testing
