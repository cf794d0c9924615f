#pragma once

// Hardware description files (TOML). Every key is optional; missing keys keep
// the HardwareModel defaults.
//
//   mesh = [2, 2]                   # width, height in tiles
//   crossbar_dim = 128
//   input_buffer = 64               # events
//   output_buffer = 64              # events
//   bandwidth_events_per_s = 1.8e9
//   neuron_energy_pj = 50
//   switch_plus_2wire_pj = 147      # split into e_switch / e_wire below
//   e_switch_pj = 49                # optional; default one third of the sum
//   i_prog_ua = 50
//   nominal_resistance_ohm = 15000
//   t_spk_s = 1e-3
//   r_on_ohm = 5000
//   r_par_ohm = 50

#include <set>
#include <string>
#include <string_view>

#include <toml.hpp>

#include "neuromap/model.hpp"
#include "neuromap/workload.hpp"

namespace neuromap {

inline HardwareModel parse_hardware_toml(std::string_view text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string("malformed hardware config: ") + std::string(e.description()));
  }
  static const std::set<std::string, std::less<>> known = {
      "mesh",          "crossbar_dim",         "input_buffer",     "output_buffer",
      "bandwidth_events_per_s", "neuron_energy_pj", "switch_plus_2wire_pj", "e_switch_pj",
      "i_prog_ua",     "nominal_resistance_ohm", "t_spk_s",        "r_on_ohm",
      "r_par_ohm"};
  for (const auto& [key, node] : tbl) {
    if (!known.count(key.str())) throw ParseError("unknown hardware key '" + std::string(key.str()) + "'");
  }

  const auto number = [&](std::string_view key, double fallback) {
    const auto* node = tbl.get(key);
    if (!node) return fallback;
    if (auto v = node->value<double>()) return *v;
    throw ParseError("hardware key '" + std::string(key) + "' must be a number");
  };
  const auto count = [&](std::string_view key, std::int64_t fallback) {
    const auto* node = tbl.get(key);
    if (!node) return fallback;
    if (auto v = node->value_exact<std::int64_t>()) {
      if (*v < 0) throw ParseError("hardware key '" + std::string(key) + "' must be >= 0");
      return *v;
    }
    throw ParseError("hardware key '" + std::string(key) + "' must be an integer");
  };

  HardwareModel hw;
  if (const auto* mesh = tbl.get("mesh")) {
    const auto* arr = mesh->as_array();
    if (!arr || arr->size() != 2 || !(*arr)[0].value_exact<std::int64_t>() ||
        !(*arr)[1].value_exact<std::int64_t>()) {
      throw ParseError("hardware key 'mesh' must be [width, height]");
    }
    hw.mesh_width = static_cast<std::int32_t>(*(*arr)[0].value_exact<std::int64_t>());
    hw.mesh_height = static_cast<std::int32_t>(*(*arr)[1].value_exact<std::int64_t>());
  }
  hw.crossbar_dim = static_cast<std::uint32_t>(count("crossbar_dim", hw.crossbar_dim));
  hw.input_buffer = static_cast<std::uint32_t>(count("input_buffer", hw.input_buffer));
  hw.output_buffer = static_cast<std::uint32_t>(count("output_buffer", hw.output_buffer));
  hw.bandwidth = number("bandwidth_events_per_s", hw.bandwidth);
  hw.e_neuron = number("neuron_energy_pj", 50.0) / 1e12;
  const double combined = number("switch_plus_2wire_pj", 147.0);
  const double e_switch = number("e_switch_pj", combined / 3.0);
  hw.e_switch = e_switch / 1e12;
  hw.e_wire = (combined - e_switch) / 2.0 / 1e12;
  hw.i_prog_nominal = number("i_prog_ua", 50.0) / 1e6;
  hw.nominal_resistance = number("nominal_resistance_ohm", hw.nominal_resistance);
  hw.t_spk = number("t_spk_s", hw.t_spk);
  hw.r_on = number("r_on_ohm", hw.r_on);
  hw.r_par = number("r_par_ohm", hw.r_par);
  try {
    hw.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("invalid hardware config: ") + e.what());
  }
  return hw;
}

inline HardwareModel load_hardware(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_hardware_toml(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace neuromap
