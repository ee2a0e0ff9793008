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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "adasub/brute.h"
#include "adasub/cases.h"
#include "adasub/error.h"
#include "adasub/features.h"
#include "adasub/infmax.h"
#include "adasub/lattice.h"
#include "adasub/policies.h"
#include "adasub/rng.h"

namespace adasub {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string Num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string ShortNum(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

ModelKind ParseModel(const std::string& name) {
  if (name == "ic") return ModelKind::kIc;
  if (name == "lt") return ModelKind::kLt;
  if (name == "elt") return ModelKind::kExtendedLt;
  throw Error(ErrorCode::kInvalidParams, "unknown model '" + name + "'");
}

// Appends one row per budget 1..|values| for an algorithm of a trial.
void AddRows(int trial, const std::string& algorithm,
             const std::vector<double>& values, std::uint64_t seed,
             double runtime_ms, std::vector<ExperimentRow>& rows) {
  for (int b = 1; b <= static_cast<int>(values.size()); ++b) {
    rows.push_back({trial, algorithm, b, values[b - 1], seed, runtime_ms});
  }
}

// Sorts per-trial rows and appends the mean over trials per (algorithm,
// budget).
std::vector<ExperimentRow> Finalize(std::vector<ExperimentRow> rows,
                                    std::uint64_t root_seed, int trials) {
  auto key = [](const ExperimentRow& r) {
    return std::tie(r.trial, r.algorithm, r.budget);
  };
  std::sort(rows.begin(), rows.end(),
            [&](const ExperimentRow& x, const ExperimentRow& y) {
              return key(x) < key(y);
            });
  std::map<std::pair<std::string, int>, std::pair<double, double>> sums;
  for (const ExperimentRow& r : rows) {
    auto& s = sums[{r.algorithm, r.budget}];
    s.first += r.value;
    s.second += r.runtime_ms;
  }
  for (const auto& [k, s] : sums) {
    rows.push_back({ExperimentRow::kSummaryTrial, k.first, k.second,
                    s.first / trials, root_seed, s.second / trials});
  }
  return rows;
}

void CheckTrials(int trials, int k) {
  if (trials < 1) throw Error(ErrorCode::kInvalidParams, "trials must be >= 1");
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "k must be >= 1");
}

}  // namespace

std::vector<ExperimentRow> RunInfmaxExperiment(const InfmaxConfig& config) {
  CheckTrials(config.trials, config.k);
  const ModelKind kind = ParseModel(config.model);
  InfluenceInstance from_file;
  if (config.graph == "file") {
    from_file = MakeInstance(LoadEdgeList(config.input), kind, config.t);
  } else if (config.graph != "er" && config.graph != "star") {
    throw Error(ErrorCode::kInvalidParams,
                "unknown graph '" + config.graph + "'");
  }
  std::vector<ExperimentRow> rows;
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t ts = MixSeed(config.seed, trial);
    InfluenceInstance inst;
    if (config.graph == "er") {
      inst = GenErdosRenyi(config.n_src, config.n_sink, config.edge_prob, kind,
                           config.t, MixSeed(ts, 0), MixSeed(ts, 1));
    } else if (config.graph == "star") {
      inst = GenStar(config.k);
    } else {
      inst = from_file;
    }
    const BipartiteGraph& g = inst.graph;
    if (config.k > g.n_src()) {
      throw Error(ErrorCode::kInvalidParams,
                  "k = " + std::to_string(config.k) + " exceeds " +
                      std::to_string(g.n_src()) + " sources");
    }
    Rng realization_rng(MixSeed(ts, 2));
    const std::vector<char> alive =
        SampleEdgeRealization(inst, realization_rng);
    auto values_of = [&](const std::vector<int>& order) {
      std::vector<double> values;
      std::vector<int> prefix;
      for (int v : order) {
        prefix.push_back(v);
        values.push_back(Spread(g, prefix, alive));
      }
      return values;
    };
    auto run = [&](const std::string& name, auto&& select) {
      const Clock::time_point start = Clock::now();
      std::vector<int> order = select();
      const double ms = config.timing ? MsSince(start) : 0.0;
      AddRows(trial, name, values_of(order), ts, ms, rows);
    };
    run("adaptive_greedy", [&] {
      InfluenceSession session(inst, alive);
      return RunGreedy(session, config.k).selected;
    });
    run("nonadaptive_greedy", [&] {
      return NonAdaptiveGreedy(
          [&](const std::vector<ElementId>& s) {
            return ExpectedSpreadNonAdaptive(inst, s);
          },
          g.n_src(), config.k);
    });
    run("degree", [&] { return DegreeBaseline(g, config.k); });
    run("random",
        [&] { return RandomPolicy(g.n_src(), config.k, MixSeed(ts, 3)); });
  }
  return Finalize(std::move(rows), config.seed, config.trials);
}

std::vector<ExperimentRow> RunFeatureExperiment(const FeatureConfig& config) {
  CheckTrials(config.trials, config.k);
  if (config.samples < 1) {
    throw Error(ErrorCode::kInvalidParams, "samples must be >= 1");
  }
  FeatureInstance from_file;
  if (!config.input.empty()) {
    std::ifstream in(config.input);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + config.input);
    from_file = ReadInstance(in);
    if (from_file.hidden.cols() != from_file.n) {
      throw Error(ErrorCode::kInvalidParams,
                  config.input + ": instance has no hidden columns");
    }
  }
  std::vector<ExperimentRow> rows;
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t ts = MixSeed(config.seed, trial);
    const FeatureInstance inst =
        config.input.empty() ? GenSynthetic(config.n, config.m, config.sparsity,
                                            config.sigma, MixSeed(ts, 0))
                             : from_file;
    if (config.k > inst.n) {
      throw Error(ErrorCode::kInvalidParams,
                  "k = " + std::to_string(config.k) + " exceeds " +
                      std::to_string(inst.n) + " features");
    }
    auto values_of = [&](const std::vector<int>& order) {
      ResidualProjector projector(inst.response);
      std::vector<double> values;
      for (int v : order) {
        projector.Add(inst.hidden.Column(v));
        values.push_back(projector.Value());
      }
      return values;
    };
    auto run = [&](const std::string& name, auto&& select) {
      const Clock::time_point start = Clock::now();
      std::vector<int> order = select();
      const double ms = config.timing ? MsSince(start) : 0.0;
      AddRows(trial, name, values_of(order), ts, ms, rows);
    };
    run("adaptive_greedy", [&] {
      FeatureSession session(inst, inst.hidden, config.samples, MixSeed(ts, 1));
      return RunGreedy(session, config.k).selected;
    });
    run("nonadaptive_greedy", [&] {
      return NonAdaptiveGreedyMc(inst, config.k, config.samples,
                                 MixSeed(ts, 2));
    });
    run("noise_oblivious",
        [&] { return NoiseObliviousGreedy(inst, config.k); });
  }
  return Finalize(std::move(rows), config.seed, config.trials);
}

void WriteCsv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << "trial,algorithm,budget,value,seed,runtime_ms\n";
  for (const ExperimentRow& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.3f", r.runtime_ms);
    out << (r.trial == ExperimentRow::kSummaryTrial ? std::string("mean")
                                                    : std::to_string(r.trial))
        << "," << r.algorithm << "," << r.budget << "," << Num(r.value) << ","
        << r.seed << "," << ms << "\n";
  }
}

namespace {

struct RatioConfig {
  std::string instance = "star";
  int k = 2;
  double a = 10.0;
  double p = 0.1;
  int big_m = 5;
  int ell = 2;
  double eps = 0.5;
  std::string model = "ic";
  int t = 2;
  int n_src = 3;
  int n_sink = 2;
  std::string input;
  std::uint64_t seed = 1;
  std::int64_t cap = kDefaultCliCap;
  std::string out;
};

std::string WitnessString(const MetricReport& r) {
  if (const auto* w = std::get_if<PolicyWitness>(&r.witness)) {
    return "psi=" + w->psi.DebugString() +
           " policy=" + w->policy.DebugString() +
           " num=" + ShortNum(w->numerator) +
           " den=" + ShortNum(w->denominator);
  }
  if (const auto* w = std::get_if<SetWitness>(&r.witness)) {
    return "L=" + w->base.DebugString() + " S=" + w->set.DebugString() +
           " num=" + ShortNum(w->numerator) +
           " den=" + ShortNum(w->denominator);
  }
  if (const auto* w = std::get_if<PairWitness>(&r.witness)) {
    return "psi=" + w->smaller.DebugString() +
           " psi'=" + w->larger.DebugString() +
           " v=" + std::to_string(w->element) +
           " num=" + ShortNum(w->numerator) +
           " den=" + ShortNum(w->denominator);
  }
  if (const auto* w = std::get_if<GapWitness>(&r.witness)) {
    return "set=" + w->set.DebugString() +
           " nonadaptive=" + ShortNum(w->nonadaptive_value) +
           " adaptive=" + ShortNum(w->adaptive_value);
  }
  return "-";
}

int CmdRatio(const RatioConfig& c, std::ostream& out) {
  TabularInstance inst;
  std::vector<std::pair<std::string, double>> extra;
  if (c.instance == "star") {
    inst = ToTabular(GenStar(c.k), c.cap);
  } else if (c.instance == "ic-random" || c.instance == "random") {
    const ModelKind kind =
        c.instance == "ic-random" ? ModelKind::kIc : ParseModel(c.model);
    inst = ToTabular(GenRandomSmall(kind, c.n_src, c.n_sink, c.seed), c.cap);
  } else if (c.instance == "file") {
    inst = ToTabular(
        MakeInstance(LoadEdgeList(c.input), ParseModel(c.model), c.t), c.cap);
  } else if (c.instance == "tightgap") {
    TightGapCase tg = BuildTightGap({c.k, c.a, c.big_m, c.p});
    inst = tg.instance;
    extra = {{"closed_form_beta", tg.beta},
             {"closed_form_gamma", tg.gamma},
             {"closed_form_gap", tg.gap}};
  } else if (c.instance == "chain") {
    ChainCase ch = BuildChain({c.ell, c.eps}, c.cap);
    inst = ch.instance;
    extra = {{"chain_bound", ch.bound}};
  } else if (c.instance == "kusner") {
    inst = BuildKusner({c.k, c.big_m, c.eps});
  } else if (c.instance == "diagnosis") {
    inst = BuildDiagnosis();
  } else {
    throw Error(ErrorCode::kInvalidParams,
                "unknown instance '" + c.instance + "'");
  }
  const int n = inst.prior.num_elements();
  if (c.k < 1 || c.k > n) {
    throw Error(ErrorCode::kInvalidParams,
                "k must lie in [1, " + std::to_string(n) + "]");
  }
  ObservationLattice lattice(inst, c.cap);
  const MetricReport gamma = GammaAdaptive(lattice, {}, c.k, c.cap);
  const MetricReport beta =
      BetaNonadaptive(ExpectedObjective(lattice), n, ElementSet(), c.k,
                      lattice.zero_tol(), c.cap);
  const MetricReport zeta = ZetaStar(lattice, c.cap);
  const MetricReport gap = AdaptivityGapExact(lattice, c.k, c.cap);

  out << "instance " << c.instance << " k=" << c.k << " elements=" << n
      << " support=" << inst.prior.size() << "\n";
  const std::pair<std::string, const MetricReport*> metrics[] = {
      {"gamma", &gamma}, {"beta", &beta}, {"zeta*", &zeta}, {"GAP", &gap}};
  for (const auto& [name, r] : metrics) {
    out << name << " = " << ShortNum(r->value) << "\n";
    out << "  witness " << WitnessString(*r) << "\n";
  }
  for (const auto& [name, value] : extra) {
    out << name << " = " << ShortNum(value) << "\n";
  }
  if (!c.out.empty()) {
    std::ofstream csv(c.out);
    if (!csv) throw Error(ErrorCode::kIoError, "cannot write " + c.out);
    csv << "instance,k,metric,value\n";
    for (const auto& [name, r] : metrics) {
      csv << c.instance << "," << c.k << "," << name << "," << Num(r->value)
          << "\n";
    }
    for (const auto& [name, value] : extra) {
      csv << c.instance << "," << c.k << "," << name << "," << Num(value)
          << "\n";
    }
  }
  return kExitOk;
}

void Emit(const std::vector<ExperimentRow>& rows, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    WriteCsv(rows, out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path);
  WriteCsv(rows, file);
  if (!file) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Adaptive submodular maximization experiments and checks",
               "adasub"};
  app.set_config("--config", "", "Read flags from a key = value file");
  app.require_subcommand(1);

  InfmaxConfig im;
  std::string im_out;
  CLI::App* infmax = app.add_subcommand("infmax", "Influence experiments");
  infmax->add_option("--graph", im.graph, "er, star or file")
      ->check(CLI::IsMember({"er", "star", "file"}));
  infmax->add_option("--model", im.model, "ic, lt or elt")
      ->check(CLI::IsMember({"ic", "lt", "elt"}));
  infmax->add_option("--t", im.t, "Samples per sink for elt");
  infmax->add_option("--n-src", im.n_src, "Sources");
  infmax->add_option("--n-sink", im.n_sink, "Sinks");
  infmax->add_option("--edge-prob", im.edge_prob, "Edge probability");
  infmax->add_option("--input", im.input, "Edge list for --graph file");
  infmax->add_option("--k", im.k, "Largest budget");
  infmax->add_option("--trials", im.trials, "Trials");
  infmax->add_option("--seed", im.seed, "Root seed");
  infmax->add_option("--out", im_out, "CSV path (standard output if empty)");
  infmax->add_flag("--timing", im.timing, "Record runtime_ms");

  FeatureConfig fc;
  std::string fc_out;
  CLI::App* feature = app.add_subcommand("feature", "Feature experiments");
  feature->add_option("--n", fc.n, "Features");
  feature->add_option("--m", fc.m, "Rows");
  feature->add_option("--sparsity", fc.sparsity, "True support size");
  feature->add_option("--sigma", fc.sigma, "Noise half-width");
  feature->add_option("--input", fc.input, "Instance file");
  feature->add_option("--k", fc.k, "Largest budget");
  feature->add_option("--trials", fc.trials, "Trials");
  feature->add_option("--seed", fc.seed, "Root seed");
  feature->add_option("--samples", fc.samples, "Monte Carlo samples");
  feature->add_option("--out", fc_out, "CSV path (standard output if empty)");
  feature->add_flag("--timing", fc.timing, "Record runtime_ms");

  RatioConfig rc;
  CLI::App* ratio = app.add_subcommand("ratio", "Exact ratios of an instance");
  ratio->add_option("--instance", rc.instance,
                    "star, ic-random, random, file, tightgap, chain, kusner "
                    "or diagnosis");
  ratio->add_option("--k", rc.k, "Policy height");
  ratio->add_option("--a", rc.a, "tightgap: a");
  ratio->add_option("--p", rc.p, "tightgap: p");
  ratio->add_option("--M", rc.big_m, "tightgap and kusner: M");
  ratio->add_option("--ell", rc.ell, "chain: length");
  ratio->add_option("--eps", rc.eps, "chain and kusner: epsilon");
  ratio->add_option("--model", rc.model, "ic, lt or elt")
      ->check(CLI::IsMember({"ic", "lt", "elt"}));
  ratio->add_option("--t", rc.t, "Samples per sink for elt");
  ratio->add_option("--n-src", rc.n_src, "random: sources");
  ratio->add_option("--n-sink", rc.n_sink, "random: sinks");
  ratio->add_option("--input", rc.input, "Edge list for --instance file");
  ratio->add_option("--seed", rc.seed, "Seed of random instances");
  ratio->add_option("--cap", rc.cap, "Enumeration cap")->envname("ADASUB_CAP");
  ratio->add_option("--out", rc.out, "Optional CSV path");

  std::string case_name;
  VerifyOptions vo;
  vo.cap = kDefaultCliCap;
  CLI::App* verify = app.add_subcommand("verify", "Run a verifier suite");
  verify->add_option("case", case_name, "Case name")->required();
  verify->add_option("--seed", vo.seed, "Root seed");
  verify->add_option("--instances", vo.instances, "Random instances");
  verify->add_option("--samples", vo.samples, "Random vectors for lemma-b2");
  verify->add_option("--cap", vo.cap, "Enumeration cap")->envname("ADASUB_CAP");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*infmax) {
      Emit(RunInfmaxExperiment(im), im_out, out);
    } else if (*feature) {
      Emit(RunFeatureExperiment(fc), fc_out, out);
    } else if (*ratio) {
      return CmdRatio(rc, out);
    } else if (*verify) {
      return RunVerification(case_name, vo, out) ? kExitOk
                                                 : kExitVerificationFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace adasub
