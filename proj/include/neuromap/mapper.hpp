#pragma once

// Cluster -> tile mapping.
//
// hill_climb() is random-restart pairwise-swap hill climbing: each restart
// draws a random injective mapping, then visits every ordered cluster pair
// once, keeping a tile swap only if it strictly lowers the objective. The best
// restart wins. Restart k draws from substream_seed(seed, k), so the result
// does not depend on how restarts are spread over threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "neuromap/energy.hpp"
#include "neuromap/model.hpp"
#include "neuromap/placement.hpp"
#include "neuromap/rng.hpp"

namespace neuromap {

enum class Objective {
  total_energy,  // E_spk + E_comm
  comm_energy,   // E_comm only
};

struct MapperConfig {
  std::size_t max_iter = 100;  // restarts
  std::uint64_t seed = 0;
  Objective objective = Objective::total_energy;
  unsigned threads = 1;
};

struct RestartTrace {
  double initial = 0.0;
  double final = 0.0;
  std::vector<double> accepted;  // objective after each accepted swap
};

struct MappingResult {
  Mapping mapping;
  Placement placement;
  EnergyReport energy;
  std::size_t best_restart = 0;
  std::vector<RestartTrace> trace;
};

/// Relative margin a candidate must beat the incumbent by to count as better.
inline constexpr double kImprovementTolerance = 1e-12;

inline bool improves(double candidate, double incumbent) noexcept {
  return candidate < incumbent - kImprovementTolerance * std::abs(incumbent);
}

namespace detail {

inline void check_capacity(const ClusteredSnn& csnn, const HardwareModel& hw) {
  if (csnn.clusters.size() > hw.tile_count()) {
    throw InfeasibleError(std::to_string(csnn.clusters.size()) + " clusters do not fit on " +
                          std::to_string(hw.tile_count()) + " tiles");
  }
}

class ObjectiveFn {
public:
  ObjectiveFn(const ClusteredSnn& csnn, const HardwareModel& hw, const Placement& placement,
              Objective objective)
      : csnn_(csnn), hw_(hw) {
    if (objective == Objective::total_energy) {
      spike_ = spike_energy(csnn, placement, CurrentModel::from_hardware(hw), hw.e_neuron).total;
      with_spike_ = true;
    }
  }

  double operator()(std::span<const TileCoord> tile_of) const {
    const double comm = comm_energy_total(csnn_, tile_of, hw_.e_switch, hw_.e_wire);
    return with_spike_ ? spike_ + comm : comm;
  }

private:
  const ClusteredSnn& csnn_;
  const HardwareModel& hw_;
  double spike_ = 0.0;
  bool with_spike_ = false;
};

inline std::vector<TileCoord> random_mapping(std::size_t clusters, const HardwareModel& hw,
                                             std::uint64_t seed) {
  Xoshiro256 rng(seed);
  const auto tiles = sample_without_replacement(rng, static_cast<std::uint32_t>(hw.tile_count()),
                                                static_cast<std::uint32_t>(clusters));
  std::vector<TileCoord> out;
  out.reserve(clusters);
  for (auto t : tiles) out.push_back(hw.tile_at(t));
  return out;
}

struct RestartOutcome {
  std::vector<TileCoord> tile_of;
  RestartTrace trace;
};

inline RestartOutcome run_restart(const ObjectiveFn& objective, std::size_t clusters,
                                  const HardwareModel& hw, std::uint64_t seed) {
  RestartOutcome out{random_mapping(clusters, hw, seed), {}};
  auto& tile_of = out.tile_of;
  double current = objective(tile_of);
  out.trace.initial = current;
  for (std::size_t x = 0; x < clusters; ++x) {
    for (std::size_t y = 0; y < clusters; ++y) {
      if (x == y) continue;
      std::swap(tile_of[x], tile_of[y]);
      const double e = objective(tile_of);
      if (improves(e, current)) {
        current = e;
        out.trace.accepted.push_back(e);
      } else {
        std::swap(tile_of[x], tile_of[y]);
      }
    }
  }
  out.trace.final = current;
  return out;
}

inline MappingResult finalize(const ClusteredSnn& csnn, const HardwareModel& hw,
                              Placement placement, std::vector<TileCoord> tile_of) {
  MappingResult r;
  r.mapping.tile_of = std::move(tile_of);
  r.energy = total_energy(csnn, r.mapping, placement, hw);
  r.placement = std::move(placement);
  return r;
}

}  // namespace detail

inline MappingResult hill_climb(const ClusteredSnn& csnn, const HardwareModel& hw,
                                const MapperConfig& cfg) {
  if (cfg.max_iter < 1) throw Error("max_iter must be >= 1");
  detail::check_capacity(csnn, hw);
  Placement placement = assign_all(csnn, hw.crossbar_dim);
  // Placement is cluster-local and does not depend on tiles, so the
  // AssignCluster step after each swap would reproduce it unchanged.
  const detail::ObjectiveFn objective(csnn, hw, placement, cfg.objective);
  const std::size_t n = csnn.clusters.size();

  std::vector<detail::RestartOutcome> outcomes(cfg.max_iter);
  const unsigned workers =
      std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.max_iter)));
  if (workers == 1) {
    for (std::size_t r = 0; r < cfg.max_iter; ++r) {
      outcomes[r] = detail::run_restart(objective, n, hw, substream_seed(cfg.seed, r));
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < cfg.max_iter; r = next++) {
          outcomes[r] = detail::run_restart(objective, n, hw, substream_seed(cfg.seed, r));
        }
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].trace.final < outcomes[best].trace.final) best = r;
  }
  auto result = detail::finalize(csnn, hw, std::move(placement), outcomes[best].tile_of);
  result.best_restart = best;
  result.trace.reserve(outcomes.size());
  for (auto& o : outcomes) result.trace.push_back(std::move(o.trace));
  return result;
}

/// One random injective mapping with greedy placement; identical to the
/// starting point of hill_climb's first restart for the same seed.
inline MappingResult baseline_random(const ClusteredSnn& csnn, const HardwareModel& hw,
                                     std::uint64_t seed) {
  detail::check_capacity(csnn, hw);
  Placement placement = assign_all(csnn, hw.crossbar_dim);
  return detail::finalize(csnn, hw, std::move(placement),
                          detail::random_mapping(csnn.clusters.size(), hw, substream_seed(seed, 0)));
}

/// Hill climbing on interconnect energy alone, the communication-minimizing
/// comparison point. Placement is still the greedy one.
inline MappingResult baseline_comm_min(const ClusteredSnn& csnn, const HardwareModel& hw,
                                       MapperConfig cfg) {
  cfg.objective = Objective::comm_energy;
  return hill_climb(csnn, hw, cfg);
}

inline constexpr std::size_t kBruteForceMaxClusters = 8;

/// Exhaustive search over every injective mapping, visiting tile sequences in
/// lexicographic tile-index order and keeping the first optimum found.
inline MappingResult brute_force_optimal(const ClusteredSnn& csnn, const HardwareModel& hw,
                                         Objective objective_kind = Objective::total_energy) {
  if (csnn.clusters.size() > kBruteForceMaxClusters) {
    throw Error("brute force limited to " + std::to_string(kBruteForceMaxClusters) +
                " clusters, got " + std::to_string(csnn.clusters.size()));
  }
  detail::check_capacity(csnn, hw);
  Placement placement = assign_all(csnn, hw.crossbar_dim);
  const detail::ObjectiveFn objective(csnn, hw, placement, objective_kind);
  const std::size_t n = csnn.clusters.size();
  const std::size_t tiles = hw.tile_count();

  std::vector<TileCoord> current(n);
  std::vector<TileCoord> best_map;
  double best = 0.0;
  std::vector<bool> used(tiles, false);
  auto recurse = [&](auto&& self, std::size_t c) -> void {
    if (c == n) {
      const double e = objective(current);
      if (best_map.empty() || improves(e, best)) {
        best = e;
        best_map = current;
      }
      return;
    }
    for (std::size_t t = 0; t < tiles; ++t) {
      if (used[t]) continue;
      used[t] = true;
      current[c] = hw.tile_at(t);
      self(self, c + 1);
      used[t] = false;
    }
  };
  recurse(recurse, 0);
  return detail::finalize(csnn, hw, std::move(placement), std::move(best_map));
}

}  // namespace neuromap
