#pragma once

// Domain types shared by every stage of the mapping flow: the SNN workload
// graph, its clustered form, the tiled hardware model, cluster->tile mappings,
// in-crossbar placements and energy reports.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace neuromap {

using NeuronId = std::uint32_t;
using ClusterId = std::uint32_t;
using SpikeCount = std::uint64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input document.
class ParseError : public Error {
public:
  using Error::Error;
};

/// The request cannot be satisfied by the hardware (too many clusters, a
/// neuron that does not fit a crossbar, ...).
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// SNN graph

struct Synapse {
  NeuronId src = 0;
  NeuronId dst = 0;
  double weight = 1.0;  // conductance in siemens

  friend bool operator==(const Synapse&, const Synapse&) = default;
};

/// Neurons are dense indices [0, neuron_count()); `names` holds the external
/// string ids, `spikes[n]` the spikes emitted by neuron n for one
/// representative input presentation.
struct SnnGraph {
  std::vector<std::string> names;
  std::vector<SpikeCount> spikes;
  std::vector<Synapse> synapses;

  [[nodiscard]] std::size_t neuron_count() const noexcept { return names.size(); }

  NeuronId add_neuron(std::string name, SpikeCount spike_count = 0) {
    names.push_back(std::move(name));
    spikes.push_back(spike_count);
    return static_cast<NeuronId>(names.size() - 1);
  }

  void add_synapse(NeuronId src, NeuronId dst, double weight) {
    synapses.push_back({src, dst, weight});
  }

  [[nodiscard]] std::optional<NeuronId> find(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<NeuronId>(it - names.begin());
  }

  /// Synapse indices grouped by destination neuron, each list in ascending
  /// source order.
  [[nodiscard]] std::vector<std::vector<std::size_t>> fan_in_lists() const {
    std::vector<std::vector<std::size_t>> lists(neuron_count());
    for (std::size_t s = 0; s < synapses.size(); ++s) lists[synapses[s].dst].push_back(s);
    for (auto& l : lists) {
      std::stable_sort(l.begin(), l.end(), [&](std::size_t a, std::size_t b) {
        return synapses[a].src < synapses[b].src;
      });
    }
    return lists;
  }

  [[nodiscard]] std::vector<std::size_t> fan_in() const {
    std::vector<std::size_t> counts(neuron_count(), 0);
    for (const auto& s : synapses) counts[s.dst]++;
    return counts;
  }

  friend bool operator==(const SnnGraph&, const SnnGraph&) = default;
};

struct Violation {
  std::string rule;
  std::string message;
};

/// Checks every SnnGraph invariant. Returns one entry per offending element;
/// an empty list means the graph is valid.
inline std::vector<Violation> validate(const SnnGraph& snn) {
  std::vector<Violation> out;
  const std::size_t n = snn.neuron_count();
  if (snn.spikes.size() != n) {
    out.push_back({"spike-table-size", "spike table has " + std::to_string(snn.spikes.size()) +
                                           " entries for " + std::to_string(n) + " neurons"});
  }
  {
    std::unordered_map<std::string_view, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = seen.emplace(snn.names[i], i);
      if (!inserted) out.push_back({"duplicate-neuron", "neuron id '" + snn.names[i] + "' repeated"});
    }
  }
  std::set<std::pair<NeuronId, NeuronId>> pairs;
  for (std::size_t i = 0; i < snn.synapses.size(); ++i) {
    const auto& s = snn.synapses[i];
    const std::string where = "synapse " + std::to_string(i);
    if (s.src >= n || s.dst >= n) {
      out.push_back({"unknown-endpoint", where + " references a neuron that does not exist"});
      continue;
    }
    if (!(s.weight > 0.0)) {
      out.push_back({"non-positive-weight", where + " has weight " + std::to_string(s.weight)});
    }
    if (!pairs.emplace(s.src, s.dst).second) {
      out.push_back({"duplicate-synapse", where + " repeats (" + snn.names[s.src] + ", " +
                                              snn.names[s.dst] + ")"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clustered SNN

/// Synapse stored inside a cluster's crossbar. `pre` and `post` index the
/// owning cluster's pre_neurons / post_neurons lists.
struct ClusterSynapse {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  double weight = 1.0;

  friend bool operator==(const ClusterSynapse&, const ClusterSynapse&) = default;
};

/// One crossbar worth of the network.
///
/// `members` are the neurons computed on this tile. Every fan-in synapse of a
/// member lives in this crossbar: its source occupies a row (pre_neurons,
/// local or remote) and the member occupies a column (post_neurons). Members
/// without fan-in only generate spikes and take no column.
struct Cluster {
  ClusterId id = 0;
  std::vector<NeuronId> members;
  std::vector<NeuronId> pre_neurons;
  std::vector<NeuronId> post_neurons;
  std::vector<ClusterSynapse> synapses;
  SpikeCount internal_spike_events = 0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct InterClusterLink {
  ClusterId src = 0;
  ClusterId dst = 0;
  SpikeCount spk = 0;

  friend bool operator==(const InterClusterLink&, const InterClusterLink&) = default;
};

/// Clusters are indexed by id (clusters[i].id == i); links are sorted by
/// (src, dst) and a link's id is its index. `spikes` is the per-neuron spike
/// table of the graph the clusters were built from.
struct ClusteredSnn {
  std::vector<Cluster> clusters;
  std::vector<InterClusterLink> links;
  std::vector<SpikeCount> spikes;

  [[nodiscard]] SpikeCount inter_cluster_spikes() const noexcept {
    SpikeCount total = 0;
    for (const auto& l : links) total += l.spk;
    return total;
  }

  friend bool operator==(const ClusteredSnn&, const ClusteredSnn&) = default;
};

struct ClusterStats {
  std::size_t in = 0;
  std::size_t out = 0;
  SpikeCount spikes = 0;

  friend bool operator==(const ClusterStats&, const ClusterStats&) = default;
};

/// In(C), Out(C) and S(C) for a cluster of `snn`.
inline ClusterStats derive_cluster_stats(const Cluster& c, const SnnGraph& snn) {
  auto check = [&](NeuronId n) {
    if (n >= snn.neuron_count() || n >= snn.spikes.size()) {
      throw Error("cluster " + std::to_string(c.id) + " references unknown neuron " +
                  std::to_string(n));
    }
  };
  for (NeuronId n : c.pre_neurons) check(n);
  for (NeuronId n : c.post_neurons) check(n);
  ClusterStats st{c.pre_neurons.size(), c.post_neurons.size(), 0};
  for (NeuronId n : c.members) {
    check(n);
    st.spikes += snn.spikes[n];
  }
  return st;
}

/// Builds the clustered graph induced by assigning every neuron of `snn` to a
/// cluster. `cluster_of[n]` must lie in [0, cluster_count). Cluster ids are the
/// given labels; empty labels produce empty clusters.
inline ClusteredSnn build_clustered(const SnnGraph& snn, const std::vector<ClusterId>& cluster_of,
                                    std::size_t cluster_count) {
  ClusteredSnn out;
  out.spikes = snn.spikes;
  out.clusters.resize(cluster_count);
  for (std::size_t i = 0; i < cluster_count; ++i) out.clusters[i].id = static_cast<ClusterId>(i);

  for (NeuronId n = 0; n < snn.neuron_count(); ++n) {
    auto& c = out.clusters.at(cluster_of.at(n));
    c.members.push_back(n);
    c.internal_spike_events += snn.spikes[n];
  }

  // Rows and columns in ascending neuron order.
  std::vector<std::vector<std::size_t>> incoming(cluster_count);
  for (std::size_t s = 0; s < snn.synapses.size(); ++s) {
    incoming[cluster_of[snn.synapses[s].dst]].push_back(s);
  }
  std::map<std::pair<ClusterId, ClusterId>, SpikeCount> link_spk;
  for (std::size_t ci = 0; ci < cluster_count; ++ci) {
    auto& c = out.clusters[ci];
    std::vector<NeuronId> pre;
    std::vector<NeuronId> post;
    for (std::size_t s : incoming[ci]) {
      pre.push_back(snn.synapses[s].src);
      post.push_back(snn.synapses[s].dst);
    }
    auto uniq = [](std::vector<NeuronId>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(pre);
    uniq(post);
    c.pre_neurons = pre;
    c.post_neurons = post;
    auto index_in = [](const std::vector<NeuronId>& v, NeuronId n) {
      return static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), n) - v.begin());
    };
    std::vector<std::size_t> order = incoming[ci];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& sa = snn.synapses[a];
      const auto& sb = snn.synapses[b];
      return std::pair(sa.src, sa.dst) < std::pair(sb.src, sb.dst);
    });
    for (std::size_t s : order) {
      const auto& syn = snn.synapses[s];
      c.synapses.push_back({index_in(pre, syn.src), index_in(post, syn.dst), syn.weight});
      const ClusterId from = cluster_of[syn.src];
      if (from != ci) link_spk[{from, static_cast<ClusterId>(ci)}] += snn.spikes[syn.src];
    }
  }
  for (const auto& [key, spk] : link_spk) out.links.push_back({key.first, key.second, spk});
  return out;
}

// ---------------------------------------------------------------------------
// Hardware

struct TileCoord {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend auto operator<=>(const TileCoord&, const TileCoord&) = default;
};

/// Tiled mesh of MxM crossbars. Defaults follow the evaluated DYNAP-SE style
/// platform: 2x2 tiles of 128x128 crossbars, 50 pJ per neuron spike,
/// e_switch + 2 e_wire = 147 pJ, 1.8 G events/s links.
struct HardwareModel {
  std::int32_t mesh_width = 2;
  std::int32_t mesh_height = 2;
  std::uint32_t crossbar_dim = 128;
  std::uint32_t input_buffer = 64;   // events
  std::uint32_t output_buffer = 64;  // events
  double bandwidth = 1.8e9;          // events / s

  double e_neuron = 50e-12;              // J per spike
  double i_prog_nominal = 50e-6;         // A
  double nominal_resistance = 15e3;      // ohm, 1/w of the reference cell
  double t_spk = 1e-3;                   // s
  double r_on = 5e3;                     // ohm
  double r_par = 50.0;                   // ohm per wire segment
  double e_switch = 49e-12;              // J
  double e_wire = 49e-12;                // J

  [[nodiscard]] std::size_t tile_count() const noexcept {
    return static_cast<std::size_t>(mesh_width) * static_cast<std::size_t>(mesh_height);
  }
  [[nodiscard]] bool contains(TileCoord t) const noexcept {
    return t.x >= 0 && t.y >= 0 && t.x < mesh_width && t.y < mesh_height;
  }
  [[nodiscard]] std::size_t tile_index(TileCoord t) const noexcept {
    return static_cast<std::size_t>(t.y) * static_cast<std::size_t>(mesh_width) +
           static_cast<std::size_t>(t.x);
  }
  [[nodiscard]] TileCoord tile_at(std::size_t index) const noexcept {
    return {static_cast<std::int32_t>(index % static_cast<std::size_t>(mesh_width)),
            static_cast<std::int32_t>(index / static_cast<std::size_t>(mesh_width))};
  }

  /// Throws Error naming the first broken constraint.
  void validate() const {
    if (mesh_width < 1 || mesh_height < 1) throw Error("mesh dimensions must be positive");
    if (crossbar_dim < 1) throw Error("crossbar_dim must be >= 1");
    if (input_buffer < 1 || output_buffer < 1) throw Error("buffer sizes must be >= 1 event");
    if (!(bandwidth > 0.0)) throw Error("bandwidth must be > 0");
    const std::pair<const char*, double> params[] = {
        {"e_neuron", e_neuron}, {"i_prog_nominal", i_prog_nominal},
        {"t_spk", t_spk},       {"r_on", r_on},
        {"r_par", r_par},       {"e_switch", e_switch},
        {"e_wire", e_wire},     {"nominal_resistance", nominal_resistance}};
    for (const auto& [name, v] : params) {
      if (!(v >= 0.0)) throw Error(std::string(name) + " must be >= 0");
    }
  }
};

// ---------------------------------------------------------------------------
// Mapping and placement

/// Injective cluster -> tile assignment; tile_of[c] is the tile of cluster c.
struct Mapping {
  std::vector<TileCoord> tile_of;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

/// Throws unless `m` assigns every cluster of `csnn` to a distinct tile of `hw`.
inline void check_mapping(const Mapping& m, std::size_t cluster_count, const HardwareModel& hw) {
  if (m.tile_of.size() != cluster_count) {
    throw Error("mapping covers " + std::to_string(m.tile_of.size()) + " of " +
                std::to_string(cluster_count) + " clusters");
  }
  std::vector<bool> used(hw.tile_count(), false);
  for (std::size_t c = 0; c < m.tile_of.size(); ++c) {
    const TileCoord t = m.tile_of[c];
    if (!hw.contains(t)) throw Error("cluster " + std::to_string(c) + " mapped outside the mesh");
    const std::size_t idx = hw.tile_index(t);
    if (used[idx]) throw Error("tile shared by two clusters (cluster " + std::to_string(c) + ")");
    used[idx] = true;
  }
}

using MappingMatrix = std::vector<std::vector<std::uint8_t>>;

/// Logical |C| x |T| matrix form: m[i][j] = 1 iff cluster i sits on tile j.
inline MappingMatrix to_matrix(const Mapping& m, const HardwareModel& hw) {
  MappingMatrix out(m.tile_of.size(), std::vector<std::uint8_t>(hw.tile_count(), 0));
  for (std::size_t c = 0; c < m.tile_of.size(); ++c) out[c][hw.tile_index(m.tile_of[c])] = 1;
  return out;
}

inline Mapping from_matrix(const MappingMatrix& mat, const HardwareModel& hw) {
  Mapping m;
  for (std::size_t c = 0; c < mat.size(); ++c) {
    if (mat[c].size() != hw.tile_count()) throw Error("mapping matrix row has wrong width");
    const auto ones = std::count(mat[c].begin(), mat[c].end(), std::uint8_t{1});
    const auto zeros = std::count(mat[c].begin(), mat[c].end(), std::uint8_t{0});
    if (ones != 1 || ones + zeros != static_cast<std::ptrdiff_t>(mat[c].size())) {
      throw Error("mapping matrix row " + std::to_string(c) + " must contain exactly one 1");
    }
    const auto j = std::find(mat[c].begin(), mat[c].end(), std::uint8_t{1}) - mat[c].begin();
    m.tile_of.push_back(hw.tile_at(static_cast<std::size_t>(j)));
  }
  check_mapping(m, mat.size(), hw);
  return m;
}

/// Row/column assignment of one cluster. row_of[i] is the crossbar row of
/// cluster.pre_neurons[i]; col_of[j] the column of cluster.post_neurons[j].
/// Row 0 / column 0 is the bottom-left corner, nearest the drivers.
struct ClusterPlacement {
  std::vector<std::uint32_t> row_of;
  std::vector<std::uint32_t> col_of;

  friend bool operator==(const ClusterPlacement&, const ClusterPlacement&) = default;
};

struct Placement {
  std::vector<ClusterPlacement> per_cluster;

  friend bool operator==(const Placement&, const Placement&) = default;
};

inline bool is_valid_placement(const Cluster& c, const ClusterPlacement& p, std::uint32_t dim) {
  if (p.row_of.size() != c.pre_neurons.size() || p.col_of.size() != c.post_neurons.size()) {
    return false;
  }
  auto injective_below = [dim](const std::vector<std::uint32_t>& v) {
    std::vector<bool> used(dim, false);
    for (auto x : v) {
      if (x >= dim || used[x]) return false;
      used[x] = true;
    }
    return true;
  };
  if (!injective_below(p.row_of) || !injective_below(p.col_of)) return false;
  for (const auto& s : c.synapses) {
    if (s.pre >= p.row_of.size() || s.post >= p.col_of.size()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reports

/// Energies in joules. Sums are accumulated in ascending cluster id, then
/// ascending link id, so two reports over equal inputs are bit-identical.
struct EnergyReport {
  double e_spk_total = 0.0;
  double e_comm_total = 0.0;
  double total = 0.0;
  std::vector<double> per_cluster_spk;
  std::vector<double> per_link_comm;

  friend bool operator==(const EnergyReport&, const EnergyReport&) = default;
};

}  // namespace neuromap
