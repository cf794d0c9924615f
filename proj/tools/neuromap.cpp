// neuromap: command-line front end.
//
//   neuromap run           --workload W.json [--hw hw.toml] [--method M|all] --out DIR
//   neuromap sweep-xbar    --workload W.json [--sizes 128,256,512] --out DIR
//   neuromap sweep-maxiter --workload W.json [--iters 10,100,1000] --out DIR
//   neuromap gen-workload  --kind feedforward --layers 4,2,1 --out W.json
//
// Exit status: 0 ok, 1 infeasible (does not fit the hardware), 2 usage or
// bad input (unreadable/malformed files, invalid parameters).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "neuromap/neuromap.hpp"

namespace fs = std::filesystem;
using namespace neuromap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

unsigned thread_budget() {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NEUROMAP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw Error(std::string("NEUROMAP_THREADS must be a positive integer, got '") + env + "'");
    }
    n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

struct Common {
  std::string workload;
  std::string hw;
  std::string method = "hillclimb";
  std::uint64_t seed = 1;
  std::size_t max_iter = 100;
  std::string out = ".";
  std::string app;
  double horizon = 1e-3;
  std::string injection = "uniform";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--workload", c.workload, "workload JSON file")->required();
  cmd->add_option("--hw", c.hw, "hardware TOML file (defaults: 2x2 mesh of 128x128 crossbars)");
  cmd->add_option("--seed", c.seed, "seed for mapping and injection");
  cmd->add_option("--max-iter", c.max_iter, "hill-climbing restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--app", c.app, "application label (default: workload file stem)");
}

HardwareModel load_hw(const Common& c) {
  if (c.hw.empty()) return HardwareModel{};
  if (!fs::exists(c.hw)) throw IoError("hardware config not found: '" + c.hw + "'");
  return load_hardware(c.hw);
}

SnnGraph load_workload(const Common& c) {
  if (!fs::exists(c.workload)) throw IoError("workload not found: '" + c.workload + "'");
  std::vector<std::string> warnings;
  SnnGraph g = load_snn(c.workload, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << c.workload << ": " << w << "\n";
  return g;
}

PipelineOptions options(const Common& c) {
  PipelineOptions o;
  o.seed = c.seed;
  o.max_iter = c.max_iter;
  o.threads = thread_budget();
  o.sim.horizon = c.horizon;
  o.sim.seed = c.seed;
  if (c.injection == "uniform") {
    o.sim.injection = InjectionMode::uniform;
  } else if (c.injection == "poisson") {
    o.sim.injection = InjectionMode::poisson;
  } else {
    throw Error("unknown injection mode '" + c.injection + "' (uniform|poisson)");
  }
  if (c.method != "all") {
    auto m = parse_method(c.method);
    if (!m) throw Error("unknown method '" + c.method + "' (hillclimb|random|comm_min|util_max|all)");
    o.method = *m;
  }
  return o;
}

std::string app_label(const Common& c) {
  return c.app.empty() ? fs::path(c.workload).stem().string() : c.app;
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + c.out + "': " + ec.message());
  return dir;
}

int cmd_run(const Common& c) {
  const SnnGraph snn = load_workload(c);
  const HardwareModel hw = load_hw(c);
  hw.validate();
  PipelineOptions opts = options(c);
  std::vector<Method> methods;
  if (c.method == "all") {
    methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
  } else {
    methods.push_back(opts.method);
  }

  std::vector<PipelineResult> runs;
  ClusteredSnn shared;
  bool have_shared = false;
  for (Method m : methods) {
    opts.method = m;
    if (m == Method::util_max) {
      runs.push_back(run_clustered(cluster_for(m, snn, hw.crossbar_dim), hw, opts));
      continue;
    }
    if (!have_shared) {
      shared = cluster_for(m, snn, hw.crossbar_dim);
      have_shared = true;
    }
    runs.push_back(run_clustered(shared, hw, opts));
  }

  const std::string app = app_label(c);
  const fs::path dir = out_dir(c);
  write_file((dir / "energy.json").string(), energy_json(runs, app));
  write_file((dir / "latency.json").string(), latency_json(runs, app));
  std::string csv(kCsvHeader);
  csv += '\n';
  for (const auto& r : runs) csv += csv_row(r, app) + '\n';
  write_file((dir / "results.csv").string(), csv);
  std::cout << csv;
  return kExitOk;
}

int cmd_sweep_xbar(const Common& c, const std::vector<std::uint32_t>& sizes) {
  const SnnGraph snn = load_workload(c);
  const HardwareModel hw = load_hw(c);
  hw.validate();
  if (sizes.empty()) throw Error("--sizes must list at least one crossbar size");
  const auto rows = sweep_crossbar(snn, hw, sizes, options(c));
  std::string csv =
      "crossbar_dim,mesh_width,mesh_height,clusters,inter_cluster_spikes,E_spk_J,E_comm_J,total_J,"
      "normalized_total\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.crossbar_dim) + ',' + std::to_string(r.mesh_width) + ',' +
           std::to_string(r.mesh_height) + ',' + std::to_string(r.clusters) + ',' +
           std::to_string(r.inter_cluster_spikes) + ',' + format_double(r.e_spk) + ',' +
           format_double(r.e_comm) + ',' + format_double(r.total) + ',' +
           format_double(r.normalized_total) + '\n';
  }
  write_file((out_dir(c) / "sweep_xbar.csv").string(), csv);
  std::cout << csv;
  return kExitOk;
}

int cmd_sweep_maxiter(const Common& c, const std::vector<std::size_t>& iters) {
  const SnnGraph snn = load_workload(c);
  const HardwareModel hw = load_hw(c);
  hw.validate();
  if (iters.empty()) throw Error("--iters must list at least one restart count");
  for (auto n : iters) {
    if (n < 1) throw Error("--iters entries must be >= 1");
  }
  const auto rows = sweep_maxiter(snn, hw, iters, options(c));
  std::string csv = "max_iter,mapping_time_s,total_J,normalized_total\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.max_iter) + ',' + format_double(r.mapping_time_s) + ',' +
           format_double(r.total) + ',' + format_double(r.normalized_total) + '\n';
  }
  write_file((out_dir(c) / "sweep_maxiter.csv").string(), csv);
  std::cout << csv;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neuromap: energy-aware SNN to crossbar-mesh mapping"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "cluster, map, place, score energy and simulate latency");
  add_common(run, run_opts);
  run->add_option("--method", run_opts.method, "hillclimb|random|comm_min|util_max|all");
  run->add_option("--horizon", run_opts.horizon, "spike injection window, seconds")
      ->check(CLI::PositiveNumber);
  run->add_option("--injection", run_opts.injection, "uniform|poisson");

  Common xbar_opts;
  std::vector<std::uint32_t> sizes{128, 256, 512};
  auto* xbar = app.add_subcommand("sweep-xbar", "re-cluster and re-map for each crossbar size");
  add_common(xbar, xbar_opts);
  xbar->add_option("--method", xbar_opts.method, "hillclimb|random|comm_min|util_max");
  xbar->add_option("--sizes", sizes, "crossbar sizes")->delimiter(',');

  Common iter_opts;
  std::vector<std::size_t> iters{10, 100, 1000};
  auto* maxiter = app.add_subcommand("sweep-maxiter", "mapping time and energy per restart budget");
  add_common(maxiter, iter_opts);
  maxiter->add_option("--iters", iters, "restart budgets")->delimiter(',');

  WorkloadSpec spec;
  std::string kind = "feedforward";
  std::string connectivity = "all_to_all";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-workload", "write a synthetic workload");
  gen->add_option("--kind", kind, "feedforward|reservoir|random");
  gen->add_option("--layers", spec.layers, "feedforward layer sizes")->delimiter(',');
  gen->add_option("--n", spec.n, "neurons (reservoir/random)");
  gen->add_option("--density", spec.density, "edge probability (reservoir/random)");
  gen->add_option("--connectivity", connectivity, "all_to_all|sparse|local (feedforward)");
  gen->add_option("--fan-in", spec.fan_in, "sources per neuron (sparse/local)");
  gen->add_option("--spike-min", spec.spike_min, "minimum spikes per neuron");
  gen->add_option("--spike-max", spec.spike_max, "maximum spikes per neuron");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*xbar) {
      if (xbar_opts.method == "all") throw Error("sweep-xbar takes a single --method");
      return cmd_sweep_xbar(xbar_opts, sizes);
    }
    if (*maxiter) return cmd_sweep_maxiter(iter_opts, iters);
    if (*gen) {
      if (kind == "feedforward") {
        spec.kind = WorkloadKind::feedforward;
      } else if (kind == "reservoir") {
        spec.kind = WorkloadKind::reservoir;
      } else if (kind == "random") {
        spec.kind = WorkloadKind::random;
      } else {
        throw Error("unknown workload kind '" + kind + "'");
      }
      if (connectivity == "all_to_all") {
        spec.connectivity = Connectivity::all_to_all;
      } else if (connectivity == "sparse") {
        spec.connectivity = Connectivity::sparse;
      } else if (connectivity == "local") {
        spec.connectivity = Connectivity::local;
      } else {
        throw Error("unknown connectivity '" + connectivity + "'");
      }
      const std::string text = serialize_snn(generate(spec));
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        write_file(gen_out, text);
      }
      return kExitOk;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "neuromap: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "neuromap: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
