#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using propscore::cli::run_cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PROPSCORE_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("propscore_cli_" + name);
}

}  // namespace

TEST(CliDerive, LogTruthFalseColumn) {
  const CliRun r = run({"derive", data("log_truth.rule"), "--C", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_GT(rows.size(), 200u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "T", "F"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 3u);
    const double x = std::stod(rows[i][0]);
    if (x >= 1.0) {
      EXPECT_EQ(rows[i][2], "-inf");
      continue;
    }
    EXPECT_NEAR(std::stod(rows[i][2]), std::log1p(-x) + 2.0 * std::log(2.0), 1e-12) << x;
  }
}

TEST(CliDerive, StepAtOneWritesNegInf) {
  const auto path = temp_file("step.rule");
  const CliRun r = run({"derive", data("step_at_one.rule"), "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(path.string());
  const auto f_block = text.find("F nonincreasing");
  ASSERT_NE(f_block, std::string::npos);
  EXPECT_NE(text.find("at1 -inf", f_block), std::string::npos);
  // The written file is complete and checks as proper.
  EXPECT_EQ(run({"check", path.string()}).code, 0);
  std::filesystem::remove(path);
}

TEST(CliDerive, NegativeDropIsUsageError) {
  const CliRun r = run({"derive", data("log_truth.rule"), "--c", "-1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(CliCheck, CatalogLogRulePasses) {
  const CliRun r = run({"check", data("log_rule.rule")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("result pass"), std::string::npos);
  EXPECT_NE(r.out.find("grid_points 235"), std::string::npos);
}

TEST(CliCheck, ImproperRuleFailsWithWitness) {
  const CliRun r = run({"check", data("improper_log.rule")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, slurp(data("golden/check_improper_log.txt")));
}

TEST(CliCheck, CoarseGridIsUsageError) {
  EXPECT_EQ(run({"check", data("log_rule.rule"), "--grid-n", "2"}).code, 2);
  EXPECT_EQ(run({"check", data("log_rule.rule"), "--tol", "-1"}).code, 2);
}

TEST(CliCheck, SphericalIsGridSupported) {
  const CliRun r = run({"check", data("spherical_rule.rule"), "--grid-n", "51"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("support grid-supported"), std::string::npos);
}

TEST(CliScore, LogRuleRows) {
  const CliRun r = run({"score", data("log_rule.rule"), data("log_forecasts.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"q", "outcome", "score"}));
  EXPECT_NEAR(std::stod(rows[1][2]), -std::log(2.0), 1e-15);
  EXPECT_EQ(rows[2][2], "-inf");
  EXPECT_EQ(rows[3][2], "-inf");
}

TEST(CliScore, BrierMean) {
  const CliRun r = run({"score", data("brier_rule.rule"), data("brier_forecasts.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(data("golden/score_brier.txt")));
}

TEST(CliScore, MalformedCsvIsUsageError) {
  const auto path = temp_file("bad.csv");
  for (const char* body : {"q,outcome\n1.5,1\n", "q,outcome\n0.5,2\n", "x,y\n0.5,1\n",
                           "q,outcome\n0.5\n", "q,outcome\n"}) {
    std::ofstream(path) << body;
    EXPECT_EQ(run({"score", data("log_rule.rule"), path.string()}).code, 2) << body;
  }
  std::filesystem::remove(path);
}

TEST(CliCompare, UniquenessGap) {
  const CliRun r = run({"compare", data("log_truth.rule"), data("log_truth_c3.rule")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mode uniqueness"), std::string::npos);
  EXPECT_NE(r.out.find("gap -3\n"), std::string::npos);
}

TEST(CliCompare, LogMinusBrierIsProper) {
  const CliRun r = run({"compare", data("log_rule.rule"), data("brier_rule.rule")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("corollary_verdict proper"), std::string::npos);
  EXPECT_NE(r.out.find("grid_verdict proper"), std::string::npos);
  EXPECT_NE(r.out.find("conclusion difference proper"), std::string::npos);
}

TEST(CliCompare, BrierMinusLogIsNotProper) {
  const CliRun r = run({"compare", data("brier_rule.rule"), data("log_rule.rule")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(data("golden/compare_brier_log.txt")));
}

TEST(CliCompare, EndpointDiscontinuityIsUsageError) {
  const CliRun r = run({"compare", data("step_at_one.rule"), data("brier_rule.rule")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("continuous"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", data("missing.rule")}).code, 2);
  EXPECT_EQ(run({"check", data("log_forecasts.csv")}).code, 2);
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"derive", data("spherical_rule.rule"), "--grid-n", "21"},
        std::vector<std::string>{"check", data("step_half.rule")},
        std::vector<std::string>{"compare", data("log_rule.rule"), data("brier_rule.rule")}}) {
    const CliRun a = run(args);
    const CliRun b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}
