#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace neuromap;
using namespace neuromap::testing;
namespace fs = std::filesystem;

namespace {

const std::string kCli = NEUROMAP_CLI_PATH;
const std::string kData = NEUROMAP_DATA_DIR;

int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path log = fs::temp_directory_path() / "neuromap_cli_test.log";
  const int status = std::system((kCli + " " + args + " > " + log.string() + " 2>&1").c_str());
  if (output) *output = read_file(log.string());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string drop_timing_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST(Pipeline, TwoInputOnOneTileHasNoCommunication) {
  const auto g = load_snn(kData + "/two_input.json");
  const auto hw = load_hardware(kData + "/single_tile.toml");
  for (Method m : kAllMethods) {
    PipelineOptions o;
    o.method = m;
    const auto r = run_pipeline(g, hw, o);
    EXPECT_EQ(r.csnn.clusters.size(), 1U);
    EXPECT_EQ(r.mapped.energy.e_comm_total, 0.0);
    EXPECT_GT(r.mapped.energy.e_spk_total, 0.0);
    EXPECT_EQ(r.latency.injected, 0U);
  }
}

TEST(Pipeline, MethodNamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("greedy").has_value());
}

TEST(Pipeline, CrossbarSweepNormalisesToFirstSize) {
  WorkloadSpec spec;
  spec.layers = {40, 30, 10};
  spec.connectivity = Connectivity::local;
  spec.fan_in = 8;
  spec.seed = 3;
  const auto g = generate(spec);
  const auto rows = sweep_crossbar(g, HardwareModel{}, {128, 256, 512}, PipelineOptions{});
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[0].normalized_total, 1.0);
  EXPECT_EQ(rows[2].clusters, 1U);
  EXPECT_EQ(rows[2].e_comm, 0.0);
  EXPECT_EQ(rows[2].inter_cluster_spikes, 0U);
  for (const auto& r : rows) {
    EXPECT_EQ(r.mesh_width, rows[0].mesh_width);
    EXPECT_EQ(r.total, r.e_spk + r.e_comm);
  }
}

TEST(Pipeline, FitMeshGrowsOnlyWhenNeeded) {
  HardwareModel hw = mesh(2, 2);
  EXPECT_EQ(fit_mesh(hw, 4).mesh_width, 2);
  const auto grown = fit_mesh(hw, 5);
  EXPECT_EQ(grown.mesh_width, 3);
  EXPECT_EQ(grown.mesh_height, 3);
}

TEST(Pipeline, MaxIterSweepOnOneClusterIsFlat) {
  const auto g = load_snn(kData + "/two_input.json");
  const auto rows = sweep_maxiter(g, HardwareModel{}, {10, 100, 1000}, PipelineOptions{});
  ASSERT_EQ(rows.size(), 3U);
  for (const auto& r : rows) {
    EXPECT_EQ(r.total, rows[0].total);
    EXPECT_EQ(r.normalized_total, 1.0);
  }
}

TEST(Report, CsvRowMatchesHeader) {
  const auto g = load_snn(kData + "/two_input.json");
  const auto r = run_pipeline(g, HardwareModel{}, PipelineOptions{});
  const auto row = csv_row(r, "demo");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
  EXPECT_EQ(row.rfind("demo,hillclimb,1,", 0), 0U);
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double v : {0.0, 1.0, 5.25e-11, 1.0 / 3.0, 123456.789}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Cli, RunWritesOutputsAndCsv) {
  const auto out = fresh_dir("neuromap_cli_run");
  std::string text;
  ASSERT_EQ(run_cli("run --workload " + kData + "/ff_64_32_10.json --hw " + kData +
                        "/hw.toml --method all --max-iter 20 --out " + out.string(),
                    &text),
            0)
      << text;
  EXPECT_TRUE(fs::exists(out / "energy.json"));
  EXPECT_TRUE(fs::exists(out / "latency.json"));
  const auto csv = read_file((out / "results.csv").string());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto energy = nlohmann::json::parse(read_file((out / "energy.json").string()));
  EXPECT_EQ(energy["runs"].size(), 4U);
}

TEST(Cli, RepeatRunsAreByteIdentical) {
  const auto a = fresh_dir("neuromap_cli_a");
  const auto b = fresh_dir("neuromap_cli_b");
  const std::string args = "run --workload " + kData + "/ff_sparse.json --hw " + kData +
                           "/hw.toml --method hillclimb --seed 9 --max-iter 30 --out ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli(args + b.string()), 0);
  for (const char* f : {"energy.json", "latency.json"}) {
    EXPECT_EQ(read_file((a / f).string()), read_file((b / f).string())) << f;
  }
  EXPECT_EQ(drop_timing_column(read_file((a / "results.csv").string())),
            drop_timing_column(read_file((b / "results.csv").string())));
}

TEST(Cli, ExitCodes) {
  std::string text;
  EXPECT_EQ(run_cli("", &text), 2);
  EXPECT_EQ(run_cli("run --workload " + kData + "/two_input.json --hw /no/such/hw.toml", &text), 2);
  EXPECT_NE(text.find("/no/such/hw.toml"), std::string::npos) << text;
  EXPECT_EQ(run_cli("run --workload /no/such/net.json", &text), 2);
  EXPECT_NE(text.find("/no/such/net.json"), std::string::npos) << text;
  EXPECT_EQ(run_cli("run --workload " + kData + "/two_input.json --method greedy", &text), 2);
  EXPECT_EQ(run_cli("frobnicate", &text), 2);
}

TEST(Cli, TooFewTilesIsInfeasible) {
  const auto out = fresh_dir("neuromap_cli_infeasible");
  std::string text;
  EXPECT_EQ(run_cli("run --workload " + kData + "/ff_sparse.json --hw " + kData + "/single_tile.toml --out " +
                        out.string(),
                    &text),
            1)
      << text;
}

TEST(Cli, GenWorkloadIsDeterministic) {
  const auto out = fresh_dir("neuromap_cli_gen");
  const std::string args = "gen-workload --kind feedforward --layers 8,4,2 --seed 4 --out ";
  ASSERT_EQ(run_cli(args + (out / "a.json").string()), 0);
  ASSERT_EQ(run_cli(args + (out / "b.json").string()), 0);
  const auto a = read_file((out / "a.json").string());
  EXPECT_EQ(a, read_file((out / "b.json").string()));
  EXPECT_EQ(load_snn((out / "a.json").string()).neuron_count(), 14U);
}

TEST(Cli, SweepsWriteCsv) {
  const auto out = fresh_dir("neuromap_cli_sweeps");
  ASSERT_EQ(run_cli("sweep-xbar --workload " + kData + "/ff_64_32_10.json --max-iter 10 --out " + out.string()), 0);
  ASSERT_EQ(run_cli("sweep-maxiter --workload " + kData + "/two_input.json --iters 1,5 --out " + out.string()), 0);
  const auto xbar = read_file((out / "sweep_xbar.csv").string());
  EXPECT_EQ(std::count(xbar.begin(), xbar.end(), '\n'), 4);
  const auto iters = read_file((out / "sweep_maxiter.csv").string());
  EXPECT_EQ(std::count(iters.begin(), iters.end(), '\n'), 3);
}

TEST(Cli, BadThreadEnvIsUsageError) {
  std::string text;
  const std::string args = "run --workload " + kData + "/two_input.json --out " + fresh_dir("neuromap_cli_env").string();
  EXPECT_EQ(run_cli(args, &text), 0) << text;
  const std::string saved = std::getenv("NEUROMAP_THREADS") ? std::getenv("NEUROMAP_THREADS") : "";
  setenv("NEUROMAP_THREADS", "zero", 1);
  EXPECT_EQ(run_cli(args, &text), 2);
  setenv("NEUROMAP_THREADS", "2", 1);
  EXPECT_EQ(run_cli(args, &text), 0);
  if (saved.empty()) {
    unsetenv("NEUROMAP_THREADS");
  } else {
    setenv("NEUROMAP_THREADS", saved.c_str(), 1);
  }
}
