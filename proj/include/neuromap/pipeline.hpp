#pragma once

// End-to-end flows: decompose -> cluster -> map/place -> energy -> simulate,
// for the energy-aware mapper and the comparison baselines, plus the
// crossbar-size and restart-count sweeps.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neuromap/clustering.hpp"
#include "neuromap/energy.hpp"
#include "neuromap/mapper.hpp"
#include "neuromap/model.hpp"
#include "neuromap/noc_sim.hpp"

namespace neuromap {

enum class Method {
  hillclimb,  // energy-aware clustering + total-energy hill climbing
  random,     // same clusters, one random mapping
  comm_min,   // same clusters, hill climbing on interconnect energy only
  util_max,   // utilization-first clusters, one random mapping
};

inline constexpr Method kAllMethods[] = {Method::hillclimb, Method::random, Method::comm_min,
                                         Method::util_max};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::hillclimb: return "hillclimb";
    case Method::random: return "random";
    case Method::comm_min: return "comm_min";
    case Method::util_max: return "util_max";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (method_name(m) == s) return m;
  }
  return std::nullopt;
}

struct PipelineOptions {
  Method method = Method::hillclimb;
  std::uint64_t seed = 1;
  std::size_t max_iter = 100;
  unsigned threads = 1;
  SimConfig sim;
};

struct PipelineResult {
  Method method = Method::hillclimb;
  ClusteredSnn csnn;
  MappingResult mapped;
  LatencyReport latency;
  double mapping_time_s = 0.0;
};

inline ClusteredSnn cluster_for(Method method, const SnnGraph& snn, std::uint32_t dim) {
  const SnnGraph decomposed = decompose(snn, dim);
  return method == Method::util_max ? cluster_util_max(decomposed, dim) : cluster(decomposed, dim);
}

inline MappingResult map_clusters(Method method, const ClusteredSnn& csnn, const HardwareModel& hw,
                                  const PipelineOptions& opts) {
  MapperConfig cfg;
  cfg.max_iter = opts.max_iter;
  cfg.seed = opts.seed;
  cfg.threads = opts.threads;
  switch (method) {
    case Method::hillclimb: return hill_climb(csnn, hw, cfg);
    case Method::comm_min: return baseline_comm_min(csnn, hw, cfg);
    case Method::random:
    case Method::util_max: return baseline_random(csnn, hw, opts.seed);
  }
  throw Error("unknown method");
}

inline PipelineResult run_clustered(const ClusteredSnn& csnn, const HardwareModel& hw,
                                    const PipelineOptions& opts) {
  PipelineResult r;
  r.method = opts.method;
  r.csnn = csnn;
  const auto t0 = std::chrono::steady_clock::now();
  r.mapped = map_clusters(opts.method, r.csnn, hw, opts);
  const auto t1 = std::chrono::steady_clock::now();
  r.mapping_time_s = std::chrono::duration<double>(t1 - t0).count();
  r.latency = simulate(r.csnn, r.mapped.mapping, hw, opts.sim);
  return r;
}

inline PipelineResult run_pipeline(const SnnGraph& snn, const HardwareModel& hw,
                                   const PipelineOptions& opts) {
  hw.validate();
  return run_clustered(cluster_for(opts.method, snn, hw.crossbar_dim), hw, opts);
}

/// Smallest square mesh holding `clusters` tiles, or `hw` unchanged when it
/// already has enough.
inline HardwareModel fit_mesh(HardwareModel hw, std::size_t clusters) {
  if (clusters <= hw.tile_count()) return hw;
  auto side = static_cast<std::int32_t>(std::ceil(std::sqrt(static_cast<double>(clusters))));
  while (static_cast<std::size_t>(side) * static_cast<std::size_t>(side) < clusters) ++side;
  hw.mesh_width = side;
  hw.mesh_height = side;
  return hw;
}

struct CrossbarSweepRow {
  std::uint32_t crossbar_dim = 0;
  std::int32_t mesh_width = 0;
  std::int32_t mesh_height = 0;
  std::size_t clusters = 0;
  SpikeCount inter_cluster_spikes = 0;
  double e_spk = 0.0;
  double e_comm = 0.0;
  double total = 0.0;
  double normalized_total = 0.0;  // total / total at sizes.front()
};

/// Re-clusters and re-maps the workload for each crossbar size. All sizes
/// share one mesh, grown if needed to fit the largest cluster count.
inline std::vector<CrossbarSweepRow> sweep_crossbar(const SnnGraph& snn, HardwareModel hw,
                                                    const std::vector<std::uint32_t>& sizes,
                                                    const PipelineOptions& opts) {
  std::vector<ClusteredSnn> clustered;
  std::size_t most = 0;
  for (auto dim : sizes) {
    clustered.push_back(cluster_for(opts.method, snn, dim));
    most = std::max(most, clustered.back().clusters.size());
  }
  hw = fit_mesh(hw, most);
  std::vector<CrossbarSweepRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    HardwareModel sized = hw;
    sized.crossbar_dim = sizes[i];
    const auto mapped = map_clusters(opts.method, clustered[i], sized, opts);
    CrossbarSweepRow row;
    row.crossbar_dim = sizes[i];
    row.mesh_width = sized.mesh_width;
    row.mesh_height = sized.mesh_height;
    row.clusters = clustered[i].clusters.size();
    row.inter_cluster_spikes = clustered[i].inter_cluster_spikes();
    row.e_spk = mapped.energy.e_spk_total;
    row.e_comm = mapped.energy.e_comm_total;
    row.total = mapped.energy.total;
    rows.push_back(row);
  }
  for (auto& row : rows) row.normalized_total = row.total / rows.front().total;
  return rows;
}

struct MaxIterSweepRow {
  std::size_t max_iter = 0;
  double mapping_time_s = 0.0;
  double total = 0.0;
  double normalized_total = 0.0;  // relative to MaxIter = 100 when swept, else the first row
};

/// Hill climbing with each restart budget on one clustering and one seed, so
/// smaller budgets explore a prefix of the larger ones' restarts.
inline std::vector<MaxIterSweepRow> sweep_maxiter(const SnnGraph& snn, const HardwareModel& hw,
                                                  const std::vector<std::size_t>& iters,
                                                  const PipelineOptions& opts) {
  const ClusteredSnn csnn = cluster_for(Method::hillclimb, snn, hw.crossbar_dim);
  std::vector<MaxIterSweepRow> rows;
  for (auto n : iters) {
    PipelineOptions o = opts;
    o.max_iter = n;
    const auto t0 = std::chrono::steady_clock::now();
    const auto mapped = map_clusters(Method::hillclimb, csnn, hw, o);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back({n, std::chrono::duration<double>(t1 - t0).count(), mapped.energy.total, 0.0});
  }
  std::size_t base = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].max_iter == 100) base = i;
  }
  for (auto& row : rows) row.normalized_total = row.total / rows[base].total;
  return rows;
}

}  // namespace neuromap
