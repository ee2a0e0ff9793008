// Copyright 2026 The adasub Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "adasub/cli.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace adasub {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunArgs(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("adasub_cli_test_" + name))
      .string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CountLines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(CliTest, StarRowCount) {
  CliResult r =
      RunArgs({"infmax", "--graph", "star", "--k", "1", "--trials", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "trial,algorithm,budget,value,seed,runtime_ms");
  EXPECT_EQ(CountLines(r.out), 1 + 4 + 4);
  EXPECT_NE(r.out.find("\nmean,adaptive_greedy,1,"), std::string::npos);
}

TEST(CliTest, Deterministic) {
  const std::vector<std::string> infmax = {
      "infmax", "--n-src", "30", "--n-sink", "30", "--edge-prob",
      "0.05",   "--k",     "5",  "--trials", "3"};
  EXPECT_EQ(RunArgs(infmax).out, RunArgs(infmax).out);
  const std::vector<std::string> feature = {
      "feature", "--n", "20", "--m",      "10", "--sparsity",
      "3",       "--k", "4",  "--trials", "2"};
  const CliResult a = RunArgs(feature);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, RunArgs(feature).out);
}

TEST(CliTest, TimingOffWritesZeroRuntime) {
  CliResult r =
      RunArgs({"infmax", "--graph", "star", "--k", "2", "--trials", "1"});
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0.000");
  }
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(RunArgs({}).code, kExitUsage);
  EXPECT_EQ(RunArgs({"infmax", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(RunArgs({"verify", "nope"}).code, kExitUsage);
  EXPECT_EQ(RunArgs({"ratio", "--instance", "nope"}).code, kExitUsage);
  EXPECT_EQ(RunArgs({"--help"}).code, kExitOk);
  EXPECT_EQ(RunArgs({"verify", "ygo"}).code, kExitOk);
  CliResult bad = RunArgs(
      {"infmax", "--graph", "file", "--input", TempPath("missing.txt")});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("missing.txt"), std::string::npos);
}

TEST(CliTest, RatioStar) {
  CliResult r = RunArgs({"ratio", "--instance", "star", "--k", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gamma = 0.75\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("zeta* = 2\n"), std::string::npos) << r.out;
}

TEST(CliTest, RatioIcRandom) {
  CliResult r =
      RunArgs({"ratio", "--instance", "ic-random", "--k", "2", "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gamma = 1\n"), std::string::npos) << r.out;
}

TEST(CliTest, RatioCsv) {
  const std::string path = TempPath("ratio.csv");
  CliResult r = RunArgs({"ratio", "--instance", "tightgap", "--k", "2", "--a",
                         "10", "--p", "0.1", "--M", "5", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = Slurp(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "instance,k,metric,value");
  EXPECT_NE(csv.find("tightgap,2,beta,1\n"), std::string::npos) << csv;
  std::filesystem::remove(path);
}

TEST(CliTest, OutFileMatchesStdout) {
  const std::string path = TempPath("star.csv");
  const std::vector<std::string> base = {"infmax", "--graph",  "star", "--k",
                                         "2",      "--trials", "2"};
  std::vector<std::string> with_out = base;
  with_out.push_back("--out");
  with_out.push_back(path);
  ASSERT_EQ(RunArgs(with_out).code, kExitOk);
  EXPECT_EQ(Slurp(path), RunArgs(base).out);
  std::filesystem::remove(path);
}

TEST(CliTest, ConfigFileAndPrecedence) {
  const std::string path = TempPath("config.toml");
  {
    std::ofstream cfg(path);
    cfg << "[infmax]\ngraph = \"star\"\nk = 2\ntrials = 1\n";
  }
  CliResult from_file = RunArgs({"--config", path, "infmax"});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(
      from_file.out,
      RunArgs({"infmax", "--graph", "star", "--k", "2", "--trials", "1"}).out);
  CliResult flag_wins = RunArgs({"--config", path, "infmax", "--k", "1"});
  EXPECT_EQ(CountLines(flag_wins.out), 1 + 4 + 4);
  std::filesystem::remove(path);
}

TEST(CliTest, CapFromEnvironment) {
  ASSERT_EQ(setenv("ADASUB_CAP", "3", 1), 0);
  CliResult capped = RunArgs({"ratio", "--instance", "star", "--k", "2"});
  EXPECT_EQ(capped.code, kExitUsage);
  EXPECT_NE(capped.err.find("cap"), std::string::npos) << capped.err;
  CliResult flag =
      RunArgs({"ratio", "--instance", "star", "--k", "2", "--cap", "1000"});
  EXPECT_EQ(flag.code, kExitOk) << flag.err;
  unsetenv("ADASUB_CAP");
  EXPECT_EQ(RunArgs({"ratio", "--instance", "star", "--k", "2"}).code, kExitOk);
}

TEST(CliTest, ZeroNoiseCurvesCoincide) {
  FeatureConfig c;
  c.n = 30;
  c.m = 15;
  c.sparsity = 4;
  c.sigma = 0.0;
  c.k = 6;
  c.trials = 2;
  std::map<std::pair<int, int>, std::vector<double>> by_point;
  for (const ExperimentRow& row : RunFeatureExperiment(c)) {
    by_point[{row.trial, row.budget}].push_back(row.value);
  }
  for (const auto& [point, values] : by_point) {
    ASSERT_EQ(values.size(), 3u);
    EXPECT_EQ(values[0], values[1]);
    EXPECT_EQ(values[1], values[2]);
  }
}

TEST(CliTest, DoublingSamplesStaysWithinThreeStandardErrors) {
  FeatureConfig c;
  c.n = 40;
  c.m = 20;
  c.sparsity = 5;
  c.sigma = 0.2;
  c.k = 8;
  c.trials = 10;
  auto final_values = [&](int samples) {
    c.samples = samples;
    std::vector<double> values;
    for (const ExperimentRow& row : RunFeatureExperiment(c)) {
      if (row.trial != ExperimentRow::kSummaryTrial &&
          row.algorithm == "adaptive_greedy" && row.budget == c.k) {
        values.push_back(row.value);
      }
    }
    return values;
  };
  auto mean_se = [](const std::vector<double>& v) {
    double mean = 0.0, sq = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    for (double x : v) sq += (x - mean) * (x - mean);
    return std::make_pair(mean, std::sqrt(sq / (v.size() - 1) / v.size()));
  };
  const auto [m1, se1] = mean_se(final_values(100));
  const auto [m2, se2] = mean_se(final_values(200));
  EXPECT_LT(std::fabs(m1 - m2), 3.0 * std::hypot(se1, se2));
}

}  // namespace
}  // namespace adasub
