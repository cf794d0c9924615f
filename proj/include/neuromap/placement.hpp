#pragma once

// In-crossbar placement. The read current of a cell drops with its distance
// from the bottom-left drivers, so the greedy placement pushes the busiest
// rows and columns toward the top-right corner.
//
// A synapse's cell is fixed by its pre-neuron's row and post-neuron's column,
// so placement is a row permutation plus a column permutation rather than a
// free choice per synapse.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "neuromap/energy.hpp"
#include "neuromap/model.hpp"
#include "neuromap/rng.hpp"

namespace neuromap {

namespace detail {

// Indices [0, keys.size()) ordered by key descending, then by neuron id.
inline std::vector<std::uint32_t> busiest_first(const std::vector<SpikeCount>& keys,
                                                const std::vector<NeuronId>& ids) {
  std::vector<std::uint32_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return ids[a] < ids[b];
  });
  return order;
}

}  // namespace detail

/// Greedy placement: pre-neurons by emitted spikes descending take rows
/// dim-1, dim-2, ...; post-neurons by received spike traffic descending take
/// columns dim-1, dim-2, ...
inline ClusterPlacement assign_cluster(const Cluster& c, std::span<const SpikeCount> spikes,
                                       std::uint32_t dim) {
  if (c.pre_neurons.size() > dim || c.post_neurons.size() > dim) {
    throw InfeasibleError("cluster " + std::to_string(c.id) + " needs " +
                          std::to_string(c.pre_neurons.size()) + " rows and " +
                          std::to_string(c.post_neurons.size()) + " columns; crossbar is " +
                          std::to_string(dim) + "x" + std::to_string(dim));
  }
  std::vector<SpikeCount> emitted(c.pre_neurons.size());
  for (std::size_t i = 0; i < emitted.size(); ++i) emitted[i] = spikes[c.pre_neurons[i]];
  std::vector<SpikeCount> received(c.post_neurons.size(), 0);
  for (const auto& s : c.synapses) received[s.post] += spikes[c.pre_neurons[s.pre]];

  ClusterPlacement p;
  p.row_of.resize(emitted.size());
  p.col_of.resize(received.size());
  const auto rows = detail::busiest_first(emitted, c.pre_neurons);
  for (std::uint32_t rank = 0; rank < rows.size(); ++rank) p.row_of[rows[rank]] = dim - 1 - rank;
  const auto cols = detail::busiest_first(received, c.post_neurons);
  for (std::uint32_t rank = 0; rank < cols.size(); ++rank) p.col_of[cols[rank]] = dim - 1 - rank;
  return p;
}

inline Placement assign_all(const ClusteredSnn& csnn, std::uint32_t dim) {
  Placement p;
  p.per_cluster.reserve(csnn.clusters.size());
  for (const auto& c : csnn.clusters) p.per_cluster.push_back(assign_cluster(c, csnn.spikes, dim));
  return p;
}

/// Uniformly random valid placement: rows and columns drawn without
/// replacement from [0, dim).
inline ClusterPlacement random_placement(const Cluster& c, std::uint32_t dim, Xoshiro256& rng) {
  if (c.pre_neurons.size() > dim || c.post_neurons.size() > dim) {
    throw InfeasibleError("cluster " + std::to_string(c.id) + " exceeds the crossbar");
  }
  ClusterPlacement p;
  p.row_of = sample_without_replacement(rng, dim, static_cast<std::uint32_t>(c.pre_neurons.size()));
  p.col_of =
      sample_without_replacement(rng, dim, static_cast<std::uint32_t>(c.post_neurons.size()));
  return p;
}

struct EnergyRange {
  double min = 0.0;
  double max = 0.0;
};

/// Spread of cluster spike energy over `trials` random placements.
inline EnergyRange placement_energy_gap(const Cluster& c, std::span<const SpikeCount> spikes,
                                        std::uint32_t dim, const CurrentModel& cm,
                                        double e_neuron, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error("placement_energy_gap needs at least one trial");
  Xoshiro256 rng(seed);
  EnergyRange r;
  for (std::size_t t = 0; t < trials; ++t) {
    const double e = cluster_spike_energy(c, spikes, random_placement(c, dim, rng), cm, e_neuron);
    if (t == 0 || e < r.min) r.min = e;
    if (t == 0 || e > r.max) r.max = e;
  }
  return r;
}

}  // namespace neuromap
