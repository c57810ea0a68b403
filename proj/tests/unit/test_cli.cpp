#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aggmc_tools/report.hpp"
#include "instances.hpp"

namespace aggmc {
namespace {

using report::Json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "aggmc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return testing::fixture(name).string(); }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

void collect_numbers(const Json& j, std::vector<std::string>& out) {
  if (j.is_number()) out.push_back(j.dump());
  if (j.is_structured())
    for (const auto& x : j) collect_numbers(x, out);
}

TEST(Cli, AnalyzeExampleOne) {
  const auto r = run({"analyze", fixture("example1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = report::parse(r.out);
  EXPECT_EQ(j["schema_version"], report::kSchemaVersion);
  EXPECT_EQ(j["verdict"]["status"], "Continuous");
  EXPECT_NEAR(j["verdict"]["p_infinity"].get<double>(), 0.132864, 1e-6);
  EXPECT_NEAR(j["harris"]["lambda"].get<double>(), 0.01190476, 1e-7);
  EXPECT_EQ(j["input_digest"].get<std::string>().size(), 64u);
  for (const char* key : {"tolerances", "structure", "spectral", "pk", "verdict", "rate", "harris", "markov_order", "gibbs"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j.contains("empirical"));
}

TEST(Cli, MarkovOrderExampleFour) {
  const auto r = run({"markov-order", fixture("example4.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report::parse(r.out)["markov_order"]["order"], 4);
}

TEST(Cli, InputErrorsExitOne) {
  const auto neg = temp_file("aggmc_neg.json", R"({"matrix":[[0.5,0.5],[1.5,-0.5]]})");
  auto r = run({"analyze", neg.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(report::parse(r.out)["error"]["code"], "NegativeEntry");

  const auto rows = temp_file("aggmc_rows.json", R"({"matrix":[[0.5,0.6],[0.5,0.5]]})");
  r = run({"analyze", rows.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(report::parse(r.out)["error"]["code"], "RowSumViolation");

  EXPECT_EQ(run({"analyze", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run({"analyze", fixture("example1.json"), "--special", "9"}).code, 1);
  EXPECT_EQ(run({"analyze", fixture("example1.json"), "--no-such-flag"}).code, 1);
  EXPECT_EQ(run({"frobnicate", fixture("example1.json")}).code, 1);
  std::filesystem::remove(neg);
  std::filesystem::remove(rows);
}

TEST(Cli, AnalysisErrorsExitTwo) {
  const auto absorbing = temp_file("aggmc_abs.json", R"({"matrix":[[1.0,0.0],[0.5,0.5]]})");
  const auto r = run({"analyze", absorbing.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(report::parse(r.out)["error"]["code"], "TrivialFactor");
  std::filesystem::remove(absorbing);
}

TEST(Cli, JsonRoundTrips) {
  for (const char* name : {"example1.json", "example2.json", "example3.json", "example4.json", "periodic_abg.json"}) {
    const auto r = run({"analyze", fixture(name), "--steps", "20000"});
    ASSERT_EQ(r.code, 0) << name << r.err;
    const Json j = report::parse(r.out);
    EXPECT_EQ(report::parse(report::serialize(j)), j) << name;
    EXPECT_EQ(report::serialize(j) + "\n", r.out) << name;
  }
}

TEST(Cli, TextContainsEveryNumber) {
  for (const char* name : {"example1.json", "example2.json", "example3.json", "example4.json", "periodic_abg.json"}) {
    const auto json = run({"analyze", fixture(name), "--steps", "20000", "--kmax", "12"});
    const auto text = run({"analyze", fixture(name), "--steps", "20000", "--kmax", "12", "--format", "text"});
    ASSERT_EQ(text.code, 0);
    std::vector<std::string> numbers;
    collect_numbers(report::parse(json.out), numbers);
    ASSERT_GT(numbers.size(), 50u);
    for (const auto& n : numbers) EXPECT_NE(text.out.find(n), std::string::npos) << name << ": " << n;
  }
}

TEST(Cli, ReportsAreReproducible) {
  const std::vector<std::string> args{"analyze", fixture("example1.json"), "--steps", "50000", "--seed", "9"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> sim{"simulate", fixture("example1.json"), "--steps", "50000", "--streams", "3"};
  EXPECT_EQ(run(sim).out, run(sim).out);
}

TEST(Cli, SimulateReportsEmpiricalEstimates) {
  const auto r = run({"simulate", fixture("example1.json"), "--steps", "200000", "--kmax", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json e = report::parse(r.out)["empirical"];
  EXPECT_EQ(e["estimates"].size(), 5u);
  for (const auto& est : e["estimates"]) {
    ASSERT_TRUE(est["reported"].get<bool>());
    EXPECT_LE(std::abs(est["z"].get<double>()), 4.0);
  }
}

TEST(Cli, SpecialOverrideAndPlotData) {
  const auto csv = std::filesystem::temp_directory_path() / "aggmc_plot.csv";
  const auto r = run({"pk", fixture("example1.json"), "--special", "3", "--kmax", "5", "--emit-plot-data", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report::parse(r.out)["special"], 3);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,p_n,bound_n");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  std::filesystem::remove(csv);
}

TEST(Cli, TrajectoryDump) {
  const auto path = std::filesystem::temp_directory_path() / "aggmc_cli_traj.bin";
  const auto r = run({"simulate", fixture("example1.json"), "--steps", "1000", "--dump-trajectory", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_trajectory(path).symbols.size(), 1000u);
  std::filesystem::remove(path);
}

TEST(Cli, HarrisAndGibbsCommands) {
  auto r = run({"harris", fixture("example2.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(report::parse(r.out)["harris"]["applicable"].get<bool>());
  r = run({"gibbs", fixture("periodic_abg.json"), "--m-max", "3", "--n-max", "4"});
  ASSERT_EQ(r.code, 0);
  const Json g = report::parse(r.out)["gibbs"];
  EXPECT_FALSE(g["gibbsian"].get<bool>());
  EXPECT_EQ(g["values"].size(), 4u);
  EXPECT_EQ(g["values"][0].size(), 5u);
}

TEST(Cli, ZeroToleranceFlag) {
  const auto noisy = temp_file("aggmc_noisy.json", R"({"matrix":[[0.5,0.5,1e-14],[0.5,0.5,0.0],[0.2,0.3,0.5]]})");
  const auto r = run({"analyze", noisy.string(), "--zero-tol", "1e-12"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report::parse(r.out)["tolerances"]["zero_tol"], 1e-12);
  std::filesystem::remove(noisy);
}

}  // namespace
}  // namespace aggmc
