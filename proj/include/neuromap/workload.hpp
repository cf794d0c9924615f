#pragma once

// Workload files and synthetic workload generators.
//
// File format (JSON, UTF-8):
//   {
//     "version": 1,
//     "neurons": ["in0", "in1", "out"],
//     "synapses": [{"src": "in0", "dst": "out", "weight": 6.6e-5}, ...],
//     "spikes": {"in0": 5, "in1": 3, "out": 2}
//   }
// Weights are conductances in siemens. A negative weight (inhibitory) is
// stored by magnitude with a warning. Neurons missing from "spikes" fire 0
// times; fractional counts are rounded half-up.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "neuromap/model.hpp"
#include "neuromap/rng.hpp"

namespace neuromap {

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

inline constexpr int kWorkloadVersion = 1;

inline SnnGraph parse_snn(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed workload document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("workload document must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw ParseError("workload document lacks an integer 'version'");
  }
  if (doc["version"].get<std::int64_t>() != kWorkloadVersion) {
    throw ParseError("unsupported workload version " + doc["version"].dump());
  }
  const auto array_field = [&](const char* key) -> const json& {
    static const json empty = json::array();
    if (!doc.contains(key)) return empty;
    if (!doc[key].is_array()) throw ParseError(std::string("'") + key + "' must be an array");
    return doc[key];
  };

  SnnGraph g;
  std::unordered_map<std::string, NeuronId> index;
  const auto& neurons = array_field("neurons");
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    if (!neurons[i].is_string()) {
      throw ParseError("neurons[" + std::to_string(i) + "] must be a string id");
    }
    auto name = neurons[i].get<std::string>();
    if (index.count(name)) throw ParseError("neurons[" + std::to_string(i) + "] repeats '" + name + "'");
    index.emplace(name, g.add_neuron(name));
  }

  const auto lookup = [&](const json& s, const char* key, std::size_t i) {
    const std::string where = "synapses[" + std::to_string(i) + "]." + key;
    if (!s.contains(key) || !s[key].is_string()) throw ParseError(where + " must be a neuron id");
    auto it = index.find(s[key].get<std::string>());
    if (it == index.end()) {
      throw ParseError(where + " references unknown neuron '" + s[key].get<std::string>() + "'");
    }
    return it->second;
  };
  const auto& synapses = array_field("synapses");
  for (std::size_t i = 0; i < synapses.size(); ++i) {
    const auto& s = synapses[i];
    const std::string where = "synapses[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ParseError(where + " must be an object");
    const NeuronId src = lookup(s, "src", i);
    const NeuronId dst = lookup(s, "dst", i);
    if (!s.contains("weight") || !s["weight"].is_number()) {
      throw ParseError(where + ".weight must be a number");
    }
    double w = s["weight"].get<double>();
    if (w < 0.0) {
      if (warnings) warnings->push_back(where + ": negative weight stored as its magnitude");
      w = -w;
    }
    g.add_synapse(src, dst, w);
  }

  if (doc.contains("spikes")) {
    if (!doc["spikes"].is_object()) throw ParseError("'spikes' must be an object");
    for (const auto& [name, value] : doc["spikes"].items()) {
      const std::string where = "spikes." + name;
      auto it = index.find(name);
      if (it == index.end()) throw ParseError(where + " names an unknown neuron");
      if (!value.is_number()) throw ParseError(where + " must be a number");
      const double v = value.get<double>();
      if (!(v >= 0.0) || !std::isfinite(v)) throw ParseError(where + " must be a non-negative count");
      g.spikes[it->second] = static_cast<SpikeCount>(std::floor(v + 0.5));
    }
  }

  const auto violations = validate(g);
  if (!violations.empty()) {
    throw ParseError("invalid workload: " + violations.front().message + " [" +
                     violations.front().rule + "]");
  }
  return g;
}

inline std::string serialize_snn(const SnnGraph& g) {
  nlohmann::ordered_json doc;
  doc["version"] = kWorkloadVersion;
  doc["neurons"] = g.names;
  auto syn = nlohmann::ordered_json::array();
  for (const auto& s : g.synapses) {
    syn.push_back({{"src", g.names[s.src]}, {"dst", g.names[s.dst]}, {"weight", s.weight}});
  }
  doc["synapses"] = std::move(syn);
  nlohmann::ordered_json spikes = nlohmann::ordered_json::object();
  for (NeuronId n = 0; n < g.neuron_count(); ++n) spikes[g.names[n]] = g.spikes[n];
  doc["spikes"] = std::move(spikes);
  return doc.dump(1) + "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline SnnGraph load_snn(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  const std::string text = read_file(path);
  try {
    return parse_snn(text, warnings);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Generators

enum class WorkloadKind { feedforward, reservoir, random };

enum class Connectivity {
  all_to_all,  // every neuron of layer l feeds every neuron of layer l+1
  sparse,      // each neuron draws `fan_in` distinct random sources
  local,       // each neuron reads a window of `fan_in` neighbouring sources (conv-like)
};

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::feedforward;
  std::vector<std::size_t> layers{4, 2, 1};  // feedforward
  std::size_t n = 10;                        // reservoir / random
  double density = 0.1;                      // reservoir / random
  Connectivity connectivity = Connectivity::all_to_all;
  std::size_t fan_in = 0;                    // sparse / local
  SpikeCount spike_min = 0;
  SpikeCount spike_max = 20;
  double weight_min = 20e-6;   // S
  double weight_max = 100e-6;  // S
  std::uint64_t seed = 1;

  void validate() const {
    if (kind == WorkloadKind::feedforward) {
      if (layers.empty()) throw Error("feedforward workload needs at least one layer");
      for (auto l : layers) {
        if (l < 1) throw Error("layer sizes must be >= 1");
      }
      if (connectivity != Connectivity::all_to_all && fan_in < 1) {
        throw Error("sparse/local connectivity needs fan_in >= 1");
      }
    } else {
      if (n < 1) throw Error("neuron count must be >= 1");
      if (!(density > 0.0 && density <= 1.0)) throw Error("density must lie in (0, 1]");
    }
    if (spike_min > spike_max) throw Error("spike_min exceeds spike_max");
    if (!(weight_min > 0.0) || weight_min > weight_max) throw Error("weights must satisfy 0 < min <= max");
  }
};

/// Deterministic in `spec` (including its seed). Draw order: spike counts for
/// every neuron in id order, then connectivity, then one weight per synapse
/// in creation order.
inline SnnGraph generate(const WorkloadSpec& spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  SnnGraph g;
  std::vector<std::pair<NeuronId, NeuronId>> edges;

  if (spec.kind == WorkloadKind::feedforward) {
    std::vector<NeuronId> first;
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
      first.push_back(static_cast<NeuronId>(g.neuron_count()));
      for (std::size_t i = 0; i < spec.layers[l]; ++i) {
        g.add_neuron("L" + std::to_string(l) + "_" + std::to_string(i));
      }
    }
    for (auto& s : g.spikes) s = static_cast<SpikeCount>(rng.between(
                                 static_cast<std::int64_t>(spec.spike_min),
                                 static_cast<std::int64_t>(spec.spike_max)));
    for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l) {
      const std::size_t prev = spec.layers[l];
      const std::size_t next = spec.layers[l + 1];
      for (std::size_t j = 0; j < next; ++j) {
        const auto dst = static_cast<NeuronId>(first[l + 1] + j);
        std::vector<std::size_t> sources;
        switch (spec.connectivity) {
          case Connectivity::all_to_all:
            for (std::size_t i = 0; i < prev; ++i) sources.push_back(i);
            break;
          case Connectivity::sparse: {
            const auto k = static_cast<std::uint32_t>(std::min(spec.fan_in, prev));
            for (auto i : sample_without_replacement(rng, static_cast<std::uint32_t>(prev), k)) {
              sources.push_back(i);
            }
            std::sort(sources.begin(), sources.end());
            break;
          }
          case Connectivity::local: {
            const std::size_t k = std::min(spec.fan_in, prev);
            const std::size_t centre = (j * prev + prev / 2) / next;
            const std::size_t lo = std::min(centre >= k / 2 ? centre - k / 2 : 0, prev - k);
            for (std::size_t i = lo; i < lo + k; ++i) sources.push_back(i);
            break;
          }
        }
        for (auto i : sources) edges.emplace_back(static_cast<NeuronId>(first[l] + i), dst);
      }
    }
  } else {
    const std::string prefix = spec.kind == WorkloadKind::reservoir ? "r" : "n";
    for (std::size_t i = 0; i < spec.n; ++i) g.add_neuron(prefix + std::to_string(i));
    for (auto& s : g.spikes) s = static_cast<SpikeCount>(rng.between(
                                 static_cast<std::int64_t>(spec.spike_min),
                                 static_cast<std::int64_t>(spec.spike_max)));
    for (NeuronId a = 0; a < spec.n; ++a) {
      for (NeuronId b = 0; b < spec.n; ++b) {
        if (a == b) continue;
        // Random graphs are acyclic (edges only toward higher ids).
        if (spec.kind == WorkloadKind::random && b < a) continue;
        if (spec.density >= 1.0 || rng.unit() < spec.density) edges.emplace_back(a, b);
      }
    }
  }
  for (const auto& [a, b] : edges) {
    g.add_synapse(a, b, spec.weight_min + (spec.weight_max - spec.weight_min) * rng.unit());
  }
  return g;
}

}  // namespace neuromap
