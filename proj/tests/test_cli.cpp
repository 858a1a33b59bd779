#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "levysid/app.hpp"
#include "levysid/dataset_io.hpp"
#include "scratch_dir.hpp"

using namespace levysid;
using levysid::testing::ScratchDir;
using levysid::testing::slurp;
using levysid::testing::spit;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(exit_code(ErrorCategory::kConfig), 2);
  EXPECT_EQ(exit_code(ErrorCategory::kData), 3);
  EXPECT_EQ(exit_code(ErrorCategory::kInsufficientData), 4);
  EXPECT_EQ(exit_code(ErrorCategory::kNumeric), 5);
  EXPECT_EQ(exit_code(ErrorCategory::kIo), 1);
  EXPECT_EQ(exit_code(ErrorCategory::kOther), 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--out", "x.csv"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--config", "lorenz3d", "--out", "x", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, SimulateBuiltins) {
  ScratchDir dir;
  spit(dir.file("l.json"), R"({"name": "lorenz3d", "grid": {"mesh": 20}})");
  auto r = cli({"simulate", "--config", dir.file("l.json"), "--out", dir.file("l.csv"), "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("M=8000 n=3"), std::string::npos) << r.out;
  const auto data = read_dataset(dir.file("l.csv"));
  EXPECT_EQ(data.size(), 8000u);
  EXPECT_EQ(data.dimension(), 3u);

  spit(dir.file("g.json"), R"({"name": "genereg1d", "grid": {"mesh": 100000}})");
  r = cli({"simulate", "--config", dir.file("g.json"), "--out", dir.file("g.bin"), "--format", "bin"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto gene = read_dataset(dir.file("g.bin"));
  EXPECT_EQ(gene.size(), 100000u);
  EXPECT_EQ(gene.dimension(), 1u);
}

TEST(Cli, MalformedExpressionIsConfigErrorWithOffset) {
  ScratchDir dir;
  spit(dir.file("bad.json"), R"({"name": "genereg1d", "drift": ["x1 + * 2"], "grid": {"mesh": 10}})");
  const auto r = cli({"simulate", "--config", dir.file("bad.json"), "--out", dir.file("o.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error[config]: ", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("$.drift[0]"), std::string::npos);
  EXPECT_NE(r.err.find("offset 5"), std::string::npos);
}

TEST(Cli, ErrorCategoriesReachTheExitCode) {
  ScratchDir dir;
  // Missing input file.
  auto r = cli({"estimate", dir.file("none.csv"), "--report", dir.file("r.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error[io]", 0), 0u);

  // Malformed dataset.
  spit(dir.file("bad.csv"), "#levy-sid-pairs v1 n=1 M=1 h=0.001\n1,2,3\n");
  r = cli({"estimate", dir.file("bad.csv"), "--report", dir.file("r.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error[data]", 0), 0u);

  // Too few rows for any jump bin.
  spit(dir.file("g.json"), R"({"name": "genereg1d", "grid": {"mesh": 5}})");
  ASSERT_EQ(cli({"simulate", "--config", dir.file("g.json"), "--out", dir.file("tiny.csv")}).code, 0);
  r = cli({"estimate", dir.file("tiny.csv"), "--report", dir.file("r.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.err.rfind("error[insufficient-data]", 0), 0u);

  // Linearly dependent custom dictionary.
  spit(dir.file("g.json"), R"({"name": "genereg1d", "grid": {"mesh": 100000}, "h": 0.01})");
  ASSERT_EQ(cli({"simulate", "--config", dir.file("g.json"), "--out", dir.file("g.csv")}).code, 0);
  spit(dir.file("e.json"), R"({"N": 1, "dictionary": ["1", "x1", "2*x1"]})");
  r = cli({"estimate", dir.file("g.csv"), "--est-config", dir.file("e.json"), "--report", dir.file("r.json")});
  EXPECT_EQ(r.code, 5) << r.err;
  EXPECT_NE(r.err.find("error[numeric]"), std::string::npos);
}

TEST(Cli, EstimateReportRoundTripsAndPlots) {
  ScratchDir dir;
  spit(dir.file("g.json"), R"({"name": "genereg1d", "grid": {"mesh": 200000}, "h": 0.01})");
  ASSERT_EQ(cli({"simulate", "--config", dir.file("g.json"), "--out", dir.file("g.csv"), "--seed", "9"}).code, 0);
  spit(dir.file("e.json"), R"({"N": 1, "dictionary": "poly:3"})");
  auto r = cli({"estimate", "--data", dir.file("g.csv"), "--est-config", dir.file("e.json"), "--report",
                dir.file("r.json"), "--seed", "9", "--config", dir.file("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("component 1: alpha="), std::string::npos);

  const std::string text = slurp(dir.file("r.json"));
  const auto report = parse_report(text);
  EXPECT_EQ(serialize_report(report), text);
  EXPECT_EQ(report.seed, std::optional<std::uint64_t>(9));
  EXPECT_TRUE(report.config.contains("model"));

  r = cli({"plot-data", "--report", dir.file("r.json"), "--config", dir.file("g.json"), "--component", "drift:1",
           "--range", "0:5:0.01", "--out", dir.file("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(dir.file("p.csv")));
  ASSERT_EQ(rows.size(), 502u);
  EXPECT_EQ(rows[0], "x,learned,true");
  EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
  EXPECT_EQ(rows[501].rfind("5,", 0), 0u);

  r = cli({"plot-data", "--report", dir.file("r.json"), "--component", "diffusion:1,1", "--range", "0:1:0.5",
           "--out", dir.file("q.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(slurp(dir.file("q.csv"))).size(), 4u);

  EXPECT_EQ(cli({"plot-data", "--report", dir.file("r.json"), "--component", "drift:2", "--range", "0:1:0.5",
                 "--out", dir.file("q.csv")})
                .code,
            2);
  EXPECT_EQ(cli({"plot-data", "--report", dir.file("r.json"), "--component", "drift:1", "--range", "1:0:0.5",
                 "--out", dir.file("q.csv")})
                .code,
            2);
}

TEST(Cli, ConstantLearnedModelPlotsConstant) {
  ScratchDir dir;
  RunReport report;
  report.config = {{"estimation", nlohmann::json::object()}};
  report.dimension = 1;
  report.rows = 10;
  report.h = 1e-3;
  report.levy = {LevyReport{1.5, 0.0, 1.0, {5, 1}, {5, 1}, {1.5}, {1.0, 1.0}}};
  report.survival_fraction = 1.0;
  report.retained_rows = 10;
  report.dictionary = "poly:2";
  report.functions = {"1", "x1", "x1^2"};
  report.drift = {1.0, "normal-equations", {{"b1", {2, 0, 0}, 0.0}}};
  report.diffusion = {1.0, "normal-equations", {{"a11", {1, 0, 0}, 0.0}}};
  write_report(report, dir.file("r.json"));

  const auto r = cli({"plot-data", "--report", dir.file("r.json"), "--component", "drift:1", "--range",
                      "-3:3:0.25", "--out", dir.file("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(dir.file("p.csv")));
  ASSERT_EQ(rows.size(), 26u);
  EXPECT_EQ(rows[0], "x,learned");
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k].substr(rows[k].find(',')), ",2");
}

TEST(Cli, ParseHelpers) {
  EXPECT_EQ(parse_range("0:5:0.01").size(), 501u);
  EXPECT_EQ(parse_range("0:1:0.3").size(), 4u);  // 0, 0.3, 0.6, 0.9
  EXPECT_EQ(parse_range("2:2:1"), std::vector<double>{2});
  EXPECT_THROW(parse_range("0:1"), ConfigError);
  EXPECT_THROW(parse_range("0:1:0"), ConfigError);
  const auto d = parse_component("diffusion:1,3", 3);
  EXPECT_FALSE(d.drift);
  EXPECT_EQ(d.i, 0u);
  EXPECT_EQ(d.j, 2u);
  EXPECT_THROW(parse_component("drift:0", 3), ConfigError);
  EXPECT_THROW(parse_component("jumps:1", 3), ConfigError);
}

TEST(Cli, PipelineIsDeterministic) {
  ScratchDir dir;
  spit(dir.file("g.json"), R"({"name": "genereg1d", "grid": {"mesh": 100000}, "h": 0.01})");
  spit(dir.file("e.json"), R"({"N": 1})");
  for (const char* sub : {"a", "b"}) {
    const auto r = cli({"pipeline", "--config", dir.file("g.json"), "--est-config", dir.file("e.json"), "--workdir",
                        dir.file(sub), "--seed", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"dataset.csv", "report.json", "plot_drift_1.csv", "plot_diffusion_11.csv"}) {
    const std::string a = slurp(dir.file(std::string("a/") + f));
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir.file(std::string("b/") + f))) << f;
  }
  EXPECT_EQ(lines(slurp(dir.file("a/plot_drift_1.csv"))).size(), 502u);
}
