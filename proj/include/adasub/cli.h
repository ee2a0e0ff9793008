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

#ifndef ADASUB_CLI_H_
#define ADASUB_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace adasub {

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// Default for every enumeration cap; ADASUB_CAP overrides it.
inline constexpr std::int64_t kDefaultCliCap = 2'000'000;

struct InfmaxConfig {
  std::string graph = "er";  // er, star or file
  std::string model = "lt";  // ic, lt or elt
  int t = 3;
  int n_src = 100;
  int n_sink = 100;
  double edge_prob = 0.01;
  std::string input;  // Edge list for graph = file.
  int k = 25;
  int trials = 20;
  std::uint64_t seed = 1;
  bool timing = false;
};

struct FeatureConfig {
  int n = 200;
  int m = 50;
  int sparsity = 10;
  double sigma = 0.1;
  std::string input;  // Instance file; generated when empty.
  int k = 30;
  int trials = 20;
  std::uint64_t seed = 1;
  int samples = 100;
  bool timing = false;
};

// One CSV row. Summary rows carry trial = kSummaryTrial and the mean value
// over trials.
struct ExperimentRow {
  static constexpr int kSummaryTrial = -1;
  int trial = 0;
  std::string algorithm;
  int budget = 0;
  double value = 0.0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
};

// Per-trial rows sorted by (trial, algorithm, budget), then the summary rows
// sorted by (algorithm, budget). Trial i uses seed MixSeed(seed, i).
std::vector<ExperimentRow> RunInfmaxExperiment(const InfmaxConfig& config);
std::vector<ExperimentRow> RunFeatureExperiment(const FeatureConfig& config);

// Header `trial,algorithm,budget,value,seed,runtime_ms`.
void WriteCsv(const std::vector<ExperimentRow>& rows, std::ostream& out);

// Entry point of `adasub <infmax|feature|ratio|verify> [flags]`. `args`
// excludes the program name. Returns the exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace adasub

#endif  // ADASUB_CLI_H_
