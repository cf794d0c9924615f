#pragma once

// Crossbar-sized partitioning of an SNN.
//
// decompose() splits neurons whose fan-in exceeds the crossbar height into a
// sequential chain of partial-sum units. cluster() then partitions the graph so
// that each part fits one MxM crossbar (see Cluster for the row/column rule),
// growing clusters along connectivity and refining them with Kernighan-Lin
// style neuron swaps that lower the number of spikes crossing clusters.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "neuromap/model.hpp"

namespace neuromap {

/// Replaces every neuron with fan-in k > dim by a chain of
/// ceil((k-1)/(dim-1)) units. The first unit takes dim original inputs, every
/// later unit takes up to dim-1 originals plus a 1 S carry from its
/// predecessor. The last unit keeps the neuron's id and outgoing synapses;
/// the others are appended as "<id>~d<k>" and fire as often as the original.
inline SnnGraph decompose(const SnnGraph& snn, std::uint32_t dim) {
  if (dim < 2) throw Error("decompose needs a crossbar dimension of at least 2");
  const auto fan_in = snn.fan_in_lists();
  bool any = false;
  for (const auto& l : fan_in) any = any || l.size() > dim;
  if (!any) return snn;

  SnnGraph out;
  out.names = snn.names;
  out.spikes = snn.spikes;
  std::set<std::string> taken(snn.names.begin(), snn.names.end());
  auto fresh_name = [&](const std::string& base, std::size_t k) {
    std::string name = base + "~d" + std::to_string(k);
    while (taken.count(name)) name += "'";
    taken.insert(name);
    return name;
  };

  for (const auto& s : snn.synapses) {
    if (fan_in[s.dst].size() <= dim) out.synapses.push_back(s);
  }
  const std::size_t width = dim - 1;
  for (NeuronId n = 0; n < snn.neuron_count(); ++n) {
    const auto& inputs = fan_in[n];
    const std::size_t k = inputs.size();
    if (k <= dim) continue;
    const std::size_t units = (k - 1 + width - 1) / width;
    std::size_t next = 0;
    NeuronId carry = 0;
    for (std::size_t u = 0; u < units; ++u) {
      const bool last = u + 1 == units;
      const NeuronId unit = last ? n : out.add_neuron(fresh_name(snn.names[n], u), snn.spikes[n]);
      const std::size_t take = u == 0 ? dim : width;
      if (u > 0) out.synapses.push_back({carry, unit, 1.0});
      for (std::size_t i = 0; i < take && next < k; ++i, ++next) {
        const auto& s = snn.synapses[inputs[next]];
        out.synapses.push_back({s.src, unit, s.weight});
      }
      carry = unit;
    }
  }
  return out;
}

namespace detail {

/// Occupied rows/columns of the clusters under construction, plus the graph
/// adjacency needed by the partitioners.
class PartitionState {
public:
  static constexpr ClusterId kUnassigned = ~ClusterId{0};

  PartitionState(const SnnGraph& snn, std::uint32_t dim)
      : snn_(snn), dim_(dim), label_(snn.neuron_count(), kUnassigned),
        sources_(snn.neuron_count()), incident_(snn.neuron_count()) {
    for (std::size_t s = 0; s < snn.synapses.size(); ++s) {
      const auto& syn = snn.synapses[s];
      sources_[syn.dst].push_back(syn.src);
      incident_[syn.src].push_back(s);
      if (syn.dst != syn.src) incident_[syn.dst].push_back(s);
    }
    for (NeuronId n = 0; n < snn.neuron_count(); ++n) {
      if (sources_[n].size() > dim) {
        throw InfeasibleError("neuron '" + snn.names[n] + "' has fan-in " +
                              std::to_string(sources_[n].size()) + " > crossbar dimension " +
                              std::to_string(dim) + "; decompose first");
      }
    }
  }

  [[nodiscard]] ClusterId label(NeuronId n) const { return label_[n]; }
  [[nodiscard]] std::size_t cluster_count() const { return rows_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& incident(NeuronId n) const { return incident_[n]; }
  [[nodiscard]] const std::vector<NeuronId>& members(ClusterId c) const { return members_[c]; }
  [[nodiscard]] const std::vector<NeuronId>& sources(NeuronId n) const { return sources_[n]; }

  ClusterId open_cluster() {
    rows_.emplace_back();
    cols_.push_back(0);
    members_.emplace_back();
    return static_cast<ClusterId>(rows_.size() - 1);
  }

  /// Rows n would open in c (its sources not yet on a row there).
  [[nodiscard]] std::size_t extra_rows(NeuronId n, ClusterId c) const {
    std::size_t extra = 0;
    for (NeuronId src : sources_[n]) extra += rows_[c].count(src) ? 0 : 1;
    return extra;
  }

  [[nodiscard]] bool fits(NeuronId n, ClusterId c) const {
    const std::size_t cols = cols_[c] + (sources_[n].empty() ? 0 : 1);
    return rows_[c].size() + extra_rows(n, c) <= dim_ && cols <= dim_;
  }

  void add(NeuronId n, ClusterId c) {
    for (NeuronId src : sources_[n]) rows_[c][src]++;
    if (!sources_[n].empty()) cols_[c]++;
    members_[c].insert(std::upper_bound(members_[c].begin(), members_[c].end(), n), n);
    label_[n] = c;
  }

  void remove(NeuronId n) {
    const ClusterId c = label_[n];
    for (NeuronId src : sources_[n]) {
      auto it = rows_[c].find(src);
      if (--it->second == 0) rows_[c].erase(it);
    }
    if (!sources_[n].empty()) cols_[c]--;
    members_[c].erase(std::lower_bound(members_[c].begin(), members_[c].end(), n));
    label_[n] = kUnassigned;
  }

  [[nodiscard]] bool can_merge(ClusterId a, ClusterId b) const {
    if (cols_[a] + cols_[b] > dim_) return false;
    std::size_t rows = rows_[a].size();
    for (const auto& [src, uses] : rows_[b]) rows += rows_[a].count(src) ? 0 : 1;
    return rows <= dim_;
  }

  /// Moves every member of b into a; b is left empty.
  void merge(ClusterId a, ClusterId b) {
    const std::vector<NeuronId> moving = members_[b];
    for (NeuronId n : moving) {
      remove(n);
      add(n, a);
    }
  }

  /// Cut spikes on synapses touching u or v, under the current labels.
  [[nodiscard]] SpikeCount local_cut(NeuronId u, NeuronId v) const {
    SpikeCount cut = 0;
    auto count = [&](std::size_t s) {
      const auto& syn = snn_.synapses[s];
      if (label_[syn.src] != label_[syn.dst]) cut += snn_.spikes[syn.src];
    };
    for (std::size_t s : incident_[u]) count(s);
    for (std::size_t s : incident_[v]) {
      const auto& syn = snn_.synapses[s];
      if (syn.src == u || syn.dst == u) continue;
      count(s);
    }
    return cut;
  }

  [[nodiscard]] SpikeCount total_cut() const {
    SpikeCount cut = 0;
    for (const auto& syn : snn_.synapses) {
      if (label_[syn.src] != label_[syn.dst]) cut += snn_.spikes[syn.src];
    }
    return cut;
  }

  /// Labels renumbered so cluster ids follow each cluster's lowest neuron.
  [[nodiscard]] std::vector<ClusterId> canonical_labels(std::size_t* count) const {
    std::vector<ClusterId> remap(rows_.size(), kUnassigned);
    std::vector<ClusterId> out(label_.size());
    ClusterId next = 0;
    for (NeuronId n = 0; n < label_.size(); ++n) {
      auto& r = remap[label_[n]];
      if (r == kUnassigned) r = next++;
      out[n] = r;
    }
    *count = next;
    return out;
  }

  const SnnGraph& snn() const { return snn_; }

private:
  const SnnGraph& snn_;
  std::uint32_t dim_;
  std::vector<ClusterId> label_;
  std::vector<std::vector<NeuronId>> sources_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::unordered_map<NeuronId, std::uint32_t>> rows_;
  std::vector<std::size_t> cols_;
  std::vector<std::vector<NeuronId>> members_;
};

}  // namespace detail

/// Progress of the swap refinement; cut_after_swap[i] is the total
/// inter-cluster spike count after the i-th accepted swap.
struct RefinementTrace {
  SpikeCount initial_cut = 0;
  std::vector<SpikeCount> cut_after_swap;
  std::size_t sweeps = 0;
};

namespace detail {

constexpr std::size_t kMaxRefinementSweeps = 10;

// First-improvement pairwise swaps between clusters, at most
// kMaxRefinementSweeps sweeps. Every accepted swap strictly lowers the cut
// and keeps both clusters within the crossbar.
inline void refine_by_swaps(PartitionState& st, RefinementTrace* trace) {
  const auto& snn = st.snn();
  SpikeCount cut = st.total_cut();
  if (trace) trace->initial_cut = cut;
  for (std::size_t sweep = 0; sweep < kMaxRefinementSweeps; ++sweep) {
    if (trace) trace->sweeps = sweep + 1;
    bool improved = false;
    for (NeuronId u = 0; u < snn.neuron_count(); ++u) {
      const ClusterId a = st.label(u);
      std::set<ClusterId> neighbours;
      for (std::size_t s : st.incident(u)) {
        const auto& syn = snn.synapses[s];
        const NeuronId other = syn.src == u ? syn.dst : syn.src;
        if (st.label(other) != a) neighbours.insert(st.label(other));
      }
      bool moved = false;
      for (ClusterId b : neighbours) {
        const std::vector<NeuronId> candidates = st.members(b);
        for (NeuronId v : candidates) {
          const SpikeCount before = st.local_cut(u, v);
          st.remove(u);
          st.remove(v);
          st.add(u, b);
          st.add(v, a);
          const SpikeCount after = st.local_cut(u, v);
          bool accept = after < before;
          if (accept) {
            // Feasibility of both clusters after the exchange.
            st.remove(u);
            st.remove(v);
            accept = st.fits(v, a) && st.fits(u, b);
            if (accept) {
              st.add(v, a);
              st.add(u, b);
            } else {
              st.add(u, a);
              st.add(v, b);
            }
          } else {
            st.remove(u);
            st.remove(v);
            st.add(u, a);
            st.add(v, b);
          }
          if (accept) {
            cut = cut - before + after;
            if (trace) trace->cut_after_swap.push_back(cut);
            improved = moved = true;
            break;
          }
        }
        if (moved) break;
      }
    }
    if (!improved) break;
  }
}

// Merges the pair of clusters with the most spikes between them while the
// union still fits, until no communicating pair fits.
inline void merge_communicating(PartitionState& st) {
  const auto& snn = st.snn();
  for (;;) {
    std::map<std::pair<ClusterId, ClusterId>, SpikeCount> traffic;
    for (const auto& syn : snn.synapses) {
      const ClusterId a = st.label(syn.src);
      const ClusterId b = st.label(syn.dst);
      if (a != b) traffic[std::minmax(a, b)] += snn.spikes[syn.src];
    }
    std::vector<std::pair<SpikeCount, std::pair<ClusterId, ClusterId>>> order;
    for (const auto& [pair, spk] : traffic) {
      if (spk > 0) order.emplace_back(spk, pair);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    bool merged = false;
    for (const auto& [spk, pair] : order) {
      if (!st.can_merge(pair.first, pair.second)) continue;
      st.merge(pair.first, pair.second);
      merged = true;
      break;
    }
    if (!merged) return;
  }
}

// Seeding opens a cluster at the lowest unassigned neuron and grows it along
// synapses and shared sources: among the reachable unassigned neurons that
// still fit, it takes the one opening the fewest new rows, then the one with
// the most spike traffic to the cluster, then the lowest id.
inline void seed_clusters(PartitionState& st) {
  const auto& snn = st.snn();
  const std::size_t n = snn.neuron_count();
  std::vector<SpikeCount> score(n, 0);
  std::vector<bool> is_candidate(n, false);

  for (NeuronId seed = 0; seed < n; ++seed) {
    if (st.label(seed) != PartitionState::kUnassigned) continue;
    const ClusterId c = st.open_cluster();
    std::vector<NeuronId> frontier;
    auto absorb = [&](NeuronId v) {
      st.add(v, c);
      is_candidate[v] = false;
      for (std::size_t s : st.incident(v)) {
        const auto& syn = snn.synapses[s];
        const NeuronId w = syn.src == v ? syn.dst : syn.src;
        if (st.label(w) != PartitionState::kUnassigned) continue;
        score[w] += snn.spikes[syn.src];
        if (!is_candidate[w]) {
          is_candidate[w] = true;
          frontier.push_back(w);
        }
      }
      // Neurons fed by one of v's sources would share its row.
      for (NeuronId src : st.sources(v)) {
        for (std::size_t s : st.incident(src)) {
          const NeuronId w = snn.synapses[s].dst;
          if (snn.synapses[s].src != src || is_candidate[w]) continue;
          if (st.label(w) != PartitionState::kUnassigned) continue;
          is_candidate[w] = true;
          frontier.push_back(w);
        }
      }
    };
    absorb(seed);
    for (;;) {
      std::optional<NeuronId> pick;
      std::size_t pick_rows = 0;
      std::size_t keep = 0;
      for (NeuronId w : frontier) {
        if (!is_candidate[w]) continue;
        frontier[keep++] = w;
        if (!st.fits(w, c)) continue;
        const std::size_t rows = st.extra_rows(w, c);
        if (!pick || rows < pick_rows ||
            (rows == pick_rows && (score[w] > score[*pick] ||
                                   (score[w] == score[*pick] && w < *pick)))) {
          pick = w;
          pick_rows = rows;
        }
      }
      frontier.resize(keep);
      if (!pick) break;
      absorb(*pick);
    }
    for (NeuronId w : frontier) {
      score[w] = 0;
      is_candidate[w] = false;
    }
  }
}

struct Partition {
  std::vector<ClusterId> labels;
  std::size_t count = 0;
  SpikeCount cut = 0;
  RefinementTrace trace;
};

inline Partition settle(PartitionState& st) {
  merge_communicating(st);
  Partition p;
  refine_by_swaps(st, &p.trace);
  p.cut = st.total_cut();
  p.labels = st.canonical_labels(&p.count);
  return p;
}

// Best of a fresh seeding at dim and the dim/2 partition merged up to dim.
// A partition that fits dim/2 also fits dim, so the cut never grows with the
// crossbar.
inline Partition partition(const SnnGraph& snn, std::uint32_t dim, std::size_t max_fan_in) {
  PartitionState fresh(snn, dim);
  seed_clusters(fresh);
  Partition best = settle(fresh);
  const std::uint32_t half = dim / 2;
  if (half >= 1 && half >= max_fan_in && best.count > 1) {
    const Partition finer = partition(snn, half, max_fan_in);
    PartitionState st(snn, dim);
    for (std::size_t c = 0; c < finer.count; ++c) st.open_cluster();
    for (NeuronId n = 0; n < snn.neuron_count(); ++n) st.add(n, finer.labels[n]);
    Partition coarse = settle(st);
    if (std::pair(coarse.cut, coarse.count) < std::pair(best.cut, best.count)) best = std::move(coarse);
  }
  return best;
}

inline ClusteredSnn finish(const detail::PartitionState& st) {
  std::size_t count = 0;
  const auto labels = st.canonical_labels(&count);
  return build_clustered(st.snn(), labels, count);
}

}  // namespace detail

/// Partitions a decomposed graph into crossbar-sized clusters.
///
/// Greedy seeding grows clusters along synapses and shared sources, then
/// communicating clusters are merged while they fit, then swap refinement
/// lowers the inter-cluster spike count. The same is done starting from the
/// partition for half the crossbar, and the lower cut wins (ties: fewer
/// clusters, then the fresh seeding). `trace` describes the winner's
/// refinement.
inline ClusteredSnn cluster(const SnnGraph& snn, std::uint32_t dim,
                            RefinementTrace* trace = nullptr) {
  const auto fan_in = snn.fan_in();
  const std::size_t max_fan_in = fan_in.empty() ? 0 : *std::max_element(fan_in.begin(), fan_in.end());
  auto p = detail::partition(snn, dim, std::max<std::size_t>(max_fan_in, 1));
  if (trace) *trace = std::move(p.trace);
  return build_clustered(snn, p.labels, p.count);
}

/// Utilization-first baseline: first-fit-decreasing packing (by fan-in,
/// ties lowest id) followed by swap refinement. Returns whichever of this
/// packing and cluster()'s result uses fewer clusters, ties going to the one
/// with fewer inter-cluster spikes.
inline ClusteredSnn cluster_util_max(const SnnGraph& snn, std::uint32_t dim) {
  detail::PartitionState st(snn, dim);
  const auto fan_in = snn.fan_in();
  std::vector<NeuronId> order(snn.neuron_count());
  std::iota(order.begin(), order.end(), NeuronId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NeuronId a, NeuronId b) { return fan_in[a] > fan_in[b]; });
  for (NeuronId v : order) {
    ClusterId target = detail::PartitionState::kUnassigned;
    for (ClusterId c = 0; c < st.cluster_count(); ++c) {
      if (st.fits(v, c)) {
        target = c;
        break;
      }
    }
    if (target == detail::PartitionState::kUnassigned) target = st.open_cluster();
    st.add(v, target);
  }
  detail::refine_by_swaps(st, nullptr);
  ClusteredSnn packed = detail::finish(st);
  ClusteredSnn grown = cluster(snn, dim);
  const auto key = [](const ClusteredSnn& c) {
    return std::pair(c.clusters.size(), c.inter_cluster_spikes());
  };
  return key(grown) < key(packed) ? grown : packed;
}

}  // namespace neuromap
