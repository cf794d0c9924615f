#pragma once

// Energy model of a clustered SNN running on a tiled crossbar mesh.
//
//   E_spk  = sum over clusters of
//              sum_members spikes(n) * e_neuron
//            + sum_synapses spikes(pre) * I(cell)^2 * t_spk * (R_ON + 1/w)
//   E_comm = sum over links of Spk(L) * (e_switch * (h - 1) + e_wire * h)
//
// where I(cell) falls off with the wire length between the drivers at the
// bottom-left corner and the cell, and h is the Manhattan hop count between
// the tiles of the link's endpoints under X-Y routing.

#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "neuromap/model.hpp"

namespace neuromap {

/// Read current of a crossbar cell with series parasitic wire resistance:
///   I(r, c, w) = V_drive / (R_ON + 1/w + (r + c) * R_par)
/// V_drive is fixed so that a cell of the nominal resistance at (0, 0) draws
/// exactly i_prog_nominal.
struct CurrentModel {
  double i_prog_nominal = 50e-6;
  double nominal_resistance = 15e3;
  double r_par = 50.0;
  double r_on = 5e3;
  double t_spk = 1e-3;

  [[nodiscard]] double v_drive() const noexcept {
    return i_prog_nominal * (r_on + nominal_resistance);
  }

  static CurrentModel from_hardware(const HardwareModel& hw) noexcept {
    return {hw.i_prog_nominal, hw.nominal_resistance, hw.r_par, hw.r_on, hw.t_spk};
  }
};

inline double cell_current(const CurrentModel& cm, std::uint32_t row, std::uint32_t col,
                           double conductance) {
  if (!(conductance > 0.0)) throw Error("conductance must be > 0");
  const double path = static_cast<double>(row) + static_cast<double>(col);
  return cm.v_drive() / (cm.r_on + 1.0 / conductance + path * cm.r_par);
}

/// Joule energy of one spike crossing the cell at (row, col).
inline double synapse_spike_energy(const CurrentModel& cm, std::uint32_t row, std::uint32_t col,
                                   double conductance) {
  const double i = cell_current(cm, row, col, conductance);
  return i * i * cm.t_spk * (cm.r_on + 1.0 / conductance);
}

/// Spike energy of one cluster placed as `p`. `spikes` is the per-neuron spike
/// table of the whole graph.
inline double cluster_spike_energy(const Cluster& c, std::span<const SpikeCount> spikes,
                                   const ClusterPlacement& p, const CurrentModel& cm,
                                   double e_neuron) {
  double e = 0.0;
  for (NeuronId n : c.members) e += static_cast<double>(spikes[n]) * e_neuron;
  for (const auto& s : c.synapses) {
    if (s.pre >= p.row_of.size() || s.post >= p.col_of.size()) {
      throw Error("placement of cluster " + std::to_string(c.id) + " misses a synapse cell");
    }
    const double n_spikes = static_cast<double>(spikes[c.pre_neurons[s.pre]]);
    e += n_spikes * synapse_spike_energy(cm, p.row_of[s.pre], p.col_of[s.post], s.weight);
  }
  return e;
}

struct SpikeEnergy {
  double total = 0.0;
  std::vector<double> per_cluster;
};

inline SpikeEnergy spike_energy(const ClusteredSnn& csnn, const Placement& placement,
                                const CurrentModel& cm, double e_neuron) {
  if (placement.per_cluster.size() != csnn.clusters.size()) {
    throw Error("placement covers " + std::to_string(placement.per_cluster.size()) + " of " +
                std::to_string(csnn.clusters.size()) + " clusters");
  }
  SpikeEnergy out;
  out.per_cluster.reserve(csnn.clusters.size());
  for (std::size_t i = 0; i < csnn.clusters.size(); ++i) {
    const double e =
        cluster_spike_energy(csnn.clusters[i], csnn.spikes, placement.per_cluster[i], cm, e_neuron);
    out.per_cluster.push_back(e);
    out.total += e;
  }
  return out;
}

inline std::int64_t hop_distance(TileCoord a, TileCoord b) noexcept {
  return std::abs(static_cast<std::int64_t>(a.x) - b.x) +
         std::abs(static_cast<std::int64_t>(a.y) - b.y);
}

/// Energy of one spike crossing h hops. h = 0 (co-located clusters) costs 0.
inline double spike_hop_energy(std::int64_t hops, double e_switch, double e_wire) noexcept {
  const auto switches = hops > 0 ? hops - 1 : 0;
  return e_switch * static_cast<double>(switches) + e_wire * static_cast<double>(hops);
}

inline double link_comm_energy(const InterClusterLink& l, std::span<const TileCoord> tile_of,
                               double e_switch, double e_wire) {
  if (l.src >= tile_of.size() || l.dst >= tile_of.size()) {
    throw Error("link " + std::to_string(l.src) + "->" + std::to_string(l.dst) +
                " references an unmapped cluster");
  }
  const auto h = hop_distance(tile_of[l.src], tile_of[l.dst]);
  return static_cast<double>(l.spk) * spike_hop_energy(h, e_switch, e_wire);
}

struct CommEnergy {
  double total = 0.0;
  std::vector<double> per_link;
};

inline CommEnergy comm_energy(const ClusteredSnn& csnn, const Mapping& mapping, double e_switch,
                              double e_wire) {
  CommEnergy out;
  out.per_link.reserve(csnn.links.size());
  for (const auto& l : csnn.links) {
    const double e = link_comm_energy(l, mapping.tile_of, e_switch, e_wire);
    out.per_link.push_back(e);
    out.total += e;
  }
  return out;
}

/// Same value as comm_energy(...).total, bit for bit, without the breakdown.
inline double comm_energy_total(const ClusteredSnn& csnn, std::span<const TileCoord> tile_of,
                                double e_switch, double e_wire) {
  double total = 0.0;
  for (const auto& l : csnn.links) total += link_comm_energy(l, tile_of, e_switch, e_wire);
  return total;
}

inline EnergyReport total_energy(const ClusteredSnn& csnn, const Mapping& mapping,
                                 const Placement& placement, const HardwareModel& hw) {
  auto spk = spike_energy(csnn, placement, CurrentModel::from_hardware(hw), hw.e_neuron);
  auto comm = comm_energy(csnn, mapping, hw.e_switch, hw.e_wire);
  EnergyReport r;
  r.e_spk_total = spk.total;
  r.e_comm_total = comm.total;
  r.total = r.e_spk_total + r.e_comm_total;
  r.per_cluster_spk = std::move(spk.per_cluster);
  r.per_link_comm = std::move(comm.per_link);
  return r;
}

}  // namespace neuromap
