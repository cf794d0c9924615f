#pragma once

// Output files of `neuromap run`: energy.json, latency.json and a results CSV.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "neuromap/pipeline.hpp"

namespace neuromap {

inline constexpr std::string_view kCsvHeader =
    "app,method,clusters,E_spk_J,E_comm_J,total_J,mean_latency_s,max_latency_s,mapping_time_s";

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline nlohmann::ordered_json energy_record(const PipelineResult& r) {
  nlohmann::ordered_json doc;
  doc["method"] = method_name(r.method);
  doc["clusters"] = r.csnn.clusters.size();
  doc["inter_cluster_spikes"] = r.csnn.inter_cluster_spikes();
  doc["E_spk_J"] = r.mapped.energy.e_spk_total;
  doc["E_comm_J"] = r.mapped.energy.e_comm_total;
  doc["total_J"] = r.mapped.energy.total;
  auto tiles = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < r.csnn.clusters.size(); ++c) {
    const auto t = r.mapped.mapping.tile_of[c];
    tiles.push_back({{"cluster", c},
                     {"tile", {t.x, t.y}},
                     {"neurons", r.csnn.clusters[c].members.size()},
                     {"E_spk_J", r.mapped.energy.per_cluster_spk[c]}});
  }
  doc["clusters_detail"] = std::move(tiles);
  auto links = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < r.csnn.links.size(); ++l) {
    const auto& link = r.csnn.links[l];
    links.push_back({{"src", link.src},
                     {"dst", link.dst},
                     {"spikes", link.spk},
                     {"E_comm_J", r.mapped.energy.per_link_comm[l]}});
  }
  doc["links"] = std::move(links);
  return doc;
}

inline nlohmann::ordered_json latency_record(const PipelineResult& r) {
  const auto& lat = r.latency;
  nlohmann::ordered_json doc;
  doc["method"] = method_name(r.method);
  doc["mean_latency_s"] = lat.mean_latency;
  doc["max_latency_s"] = lat.max_latency;
  doc["injected"] = lat.injected;
  doc["delivered"] = lat.delivered;
  doc["in_flight"] = lat.in_flight;
  doc["blocked"] = lat.blocked;
  doc["end_time_s"] = lat.end_time;
  doc["overloaded_channels"] = lat.overloaded_channels;
  auto channels = nlohmann::ordered_json::array();
  for (const auto& ch : lat.channels) {
    if (ch.events == 0) continue;
    channels.push_back({{"from", {ch.from.x, ch.from.y}},
                        {"to", {ch.to.x, ch.to.y}},
                        {"events", ch.events},
                        {"utilization", ch.utilization},
                        {"credit_stalls", ch.credit_stalls}});
  }
  doc["channels"] = std::move(channels);
  return doc;
}

// Both documents are {"app": ..., "runs": [one record per method]}. When a
// comm_min run is present every energy record also carries
// total_normalized_to_comm_min.
inline std::string energy_json(const std::vector<PipelineResult>& runs, std::string_view app) {
  const PipelineResult* ref = nullptr;
  for (const auto& r : runs) {
    if (r.method == Method::comm_min) ref = &r;
  }
  nlohmann::ordered_json doc;
  doc["app"] = app;
  doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    auto rec = energy_record(r);
    if (ref) rec["total_normalized_to_comm_min"] = r.mapped.energy.total / ref->mapped.energy.total;
    doc["runs"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

inline std::string latency_json(const std::vector<PipelineResult>& runs, std::string_view app) {
  nlohmann::ordered_json doc;
  doc["app"] = app;
  doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) doc["runs"].push_back(latency_record(r));
  return doc.dump(2) + "\n";
}

inline std::string csv_row(const PipelineResult& r, std::string_view app) {
  std::string row(app);
  row += ',';
  row += method_name(r.method);
  row += ',' + std::to_string(r.csnn.clusters.size());
  for (double v : {r.mapped.energy.e_spk_total, r.mapped.energy.e_comm_total, r.mapped.energy.total,
                   r.latency.mean_latency, r.latency.max_latency, r.mapping_time_s}) {
    row += ',' + format_double(v);
  }
  return row;
}

}  // namespace neuromap
