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

#include "adasub/cases.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "adasub/brute.h"
#include "adasub/infmax.h"
#include "adasub/lattice.h"
#include "adasub/linalg.h"
#include "adasub/policies.h"
#include "adasub/rng.h"

namespace adasub {
namespace {

std::string Num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

bool Near(double x, double y, double rel = kValueRelTol) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::fabs(x - y) <= rel * std::max({1.0, std::fabs(x), std::fabs(y)});
}

// Collects check lines and prints the verdict.
class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  void Check(const std::string& label, bool ok) {
    out_ << (ok ? "  ok    " : "  FAIL  ") << label << "\n";
    if (!ok) ++failures_;
  }

  void Note(const std::string& line) { out_ << "  note  " << line << "\n"; }

  bool Finish(const std::string& name) {
    out_ << (failures_ == 0 ? "PASS " : "FAIL ") << name;
    if (failures_ > 0) out_ << " (" << failures_ << " failed)";
    out_ << "\n";
    return failures_ == 0;
  }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

std::string Compare(const std::string& what, double got, double want) {
  return what + " = " + Num(got) + " (expected " + Num(want) + ")";
}

double TightGapBeta(const TightGapParams& q) {
  return (1.0 + (q.k - 1) * q.a * q.p) / q.k;
}

double TightGapGamma(const TightGapParams& q) {
  return q.k / (1.0 + (q.k - 1) * q.a * q.p * q.m);
}

}  // namespace

TightGapCase BuildTightGap(const TightGapParams& params) {
  const TightGapParams& q = params;
  if (q.k < 1 || q.m < 1 || !(q.a >= 0.0) || !(q.p >= 0.0) ||
      q.p > 1.0 / q.m + kProbTol) {
    throw Error(ErrorCode::kInvalidParams,
                "tight gap needs k >= 1, M >= 1, a >= 0 and 0 <= p <= 1/M");
  }
  if (q.a * q.p * q.m < 1.0 - 1e-12) {
    throw Error(ErrorCode::kInvalidParams,
                "tight gap needs apM >= 1 so that gamma <= 1, got apM = " +
                    Num(q.a * q.p * q.m));
  }
  const int n = 1 + q.m * q.k;
  if (n > ElementSet::kMaxElements) {
    throw Error(ErrorCode::kInvalidParams, "tight gap needs 1 + Mk <= 64");
  }
  std::vector<int> num_states(n, 1);
  num_states[0] = q.m + 1;
  std::vector<Realization> support;
  std::vector<double> probs;
  const double p0 = 1.0 - q.p * q.m;
  for (int y = 0; y <= q.m; ++y) {
    const double prob = y == 0 ? p0 : q.p;
    if (prob <= kProbTol) continue;
    Realization phi;
    phi.states.assign(n, 0);
    phi.states[0] = y;
    support.push_back(std::move(phi));
    probs.push_back(prob);
  }
  double total = 0.0;
  for (double x : probs) total += x;
  for (double& x : probs) x /= total;

  const int k = q.k;
  const double a = q.a;
  const double ap = q.a * q.p;
  Objective f = [k, a, ap](ElementSet s, const Realization& phi) {
    if (s.empty()) return 0.0;
    if (!s.contains(0)) return 1.0 + ap * (s.size() - 1);
    const int y = phi.states[0];
    if (y == 0) return 1.0;
    std::uint64_t block = ((std::uint64_t{1} << k) - 1) << (1 + (y - 1) * k);
    return 1.0 + a * ElementSet(s.mask() & block).size();
  };
  TightGapCase out;
  out.instance =
      TabularInstance{TabularPrior(StateSpace(num_states), std::move(support),
                                   std::move(probs)),
                      std::move(f), "tightgap"};
  out.beta = TightGapBeta(q);
  out.gamma = TightGapGamma(q);
  out.gap = (1.0 + (q.k - 1) * ap) / (1.0 + (q.k - 1) * ap * q.m);
  return out;
}

TabularInstance BuildKusner(const KusnerParams& params) {
  const int k = params.k;
  const int m = params.m;
  const double eps = params.eps;
  if (k < 2 || m < 2 || !(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "Kusner instance needs k >= 2, M >= 2 and eps > 0");
  }
  const int n = 1 + k + (k - 1) * m;
  if (n > ElementSet::kMaxElements) {
    throw Error(ErrorCode::kInvalidParams,
                "Kusner instance needs 1 + k + (k-1)M <= 64");
  }
  std::vector<int> num_states(n, 2);
  num_states[0] = m;
  for (int i = 1; i <= k; ++i) num_states[i] = 1;
  std::vector<Realization> support;
  std::vector<double> probs;
  for (int y = 0; y < m; ++y) {
    Realization phi;
    phi.states.assign(n, 0);
    phi.states[0] = y;
    for (int i = 1; i < k; ++i) phi.states[1 + k + (i - 1) * m + y] = 1;
    support.push_back(std::move(phi));
    probs.push_back(1.0 / m);
  }
  Objective f = [k, m, eps, n](ElementSet s, const Realization& phi) {
    double value = s.contains(0) ? 1.0 : 0.0;
    for (int i = 1; i <= k; ++i) {
      if (s.contains(i)) value += 1.0 + eps;
    }
    for (int v = 1 + k; v < n; ++v) {
      if (s.contains(v) && phi.states[v] == 1) value += m;
    }
    return value;
  };
  return TabularInstance{TabularPrior(StateSpace(num_states),
                                      std::move(support), std::move(probs)),
                         std::move(f), "kusner"};
}

namespace {

// Number of consecutive live chain edges after u_i.
int ChainRun(const std::vector<bool>& chain_alive, int i) {
  int run = 0;
  while (i + run + 1 < static_cast<int>(chain_alive.size()) &&
         chain_alive[i + run + 1]) {
    ++run;
  }
  return run;
}

PolicyTree ChainPolicyFrom(const ChainParams& params, int last_active) {
  if (last_active == params.ell) return PolicyTree::Leaf();
  // The chain edge into u_{last+1} is dead, so v_{last+1}'s edge is alive and
  // its state is at least 1.
  PolicyTree::Children children;
  for (int s = 1; s <= params.ell - last_active; ++s) {
    children[s] = ChainPolicyFrom(params, last_active + s);
  }
  return PolicyTree::Node(ChainV(params, last_active + 1), std::move(children));
}

}  // namespace

ChainCase BuildChain(const ChainParams& params, std::int64_t cap) {
  const int ell = params.ell;
  const double eps = params.eps;
  if (ell < 1 || !(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "chain needs l >= 1 and eps in (0, 1)");
  }
  if (ell >= 40 || (std::int64_t{1} << ell) > cap || 2 * ell + 1 > 64) {
    throw Error(ErrorCode::kBudgetExceeded,
                "chain support 2^" + std::to_string(ell) + " exceeds cap " +
                    std::to_string(cap));
  }
  const int n = 2 * ell + 1;
  std::vector<int> num_states(n);
  for (int i = 0; i <= ell; ++i) num_states[i] = ell - i + 1;
  for (int i = 1; i <= ell; ++i) num_states[ell + i] = ell - i + 2;

  std::vector<Realization> support;
  std::vector<double> probs;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ell); ++bits) {
    // chain_alive[i] for i in 1..l: the in-edge of u_i comes from u_{i-1}.
    std::vector<bool> chain_alive(ell + 1, false);
    double prob = 1.0;
    for (int i = 1; i <= ell; ++i) {
      chain_alive[i] = (bits >> (i - 1)) & 1;
      prob *= chain_alive[i] ? 1.0 - eps : eps;
    }
    Realization phi;
    phi.states.assign(n, 0);
    for (int i = 0; i <= ell; ++i) phi.states[i] = ChainRun(chain_alive, i);
    for (int i = 1; i <= ell; ++i) {
      phi.states[ell + i] = chain_alive[i] ? 0 : 1 + ChainRun(chain_alive, i);
    }
    support.push_back(std::move(phi));
    probs.push_back(prob);
  }

  // The states determine every edge: v_i's edge is alive iff its state is
  // positive, and the run of u_i is its own state.
  Objective f = [ell](ElementSet s, const Realization& phi) {
    std::uint64_t reached = 0;
    auto reach_from_u = [&](int i) {
      for (int j = i; j <= i + phi.states[i]; ++j) {
        reached |= std::uint64_t{1} << j;
      }
    };
    for (ElementId e : s.elements()) {
      reached |= std::uint64_t{1} << e;
      if (e <= ell) {
        reach_from_u(e);
      } else if (phi.states[e] > 0) {
        reach_from_u(e - ell);
      }
    }
    return static_cast<double>(__builtin_popcountll(reached));
  };

  ChainCase out;
  out.instance =
      TabularInstance{TabularPrior(StateSpace(num_states), std::move(support),
                                   std::move(probs)),
                      std::move(f), "chain"};
  PolicyTree::Children children;
  for (int j = 0; j <= ell; ++j) children[j] = ChainPolicyFrom(params, j);
  out.policy = PolicyTree::Node(ChainU(params, 0), std::move(children));
  out.bound = (1.0 / eps + 2.0 * eps * ell) / (ell + eps * ell + 1.0);
  return out;
}

DiagnosisInstance DiagnosisTable() {
  DiagnosisInstance d = {
      {{{+1, +1}, {+1, -1}, {-1, +1}}, {{+1, +1}, {+1, -1}, {-1, -1}}},
      {{1.0 / 6, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 1.0 / 6}}};
  return d;
}

TabularInstance BuildDiagnosis() {
  const DiagnosisInstance d = DiagnosisTable();
  std::vector<Realization> support;
  std::vector<double> probs;
  for (int x = 0; x < 2; ++x) {
    for (int q = 0; q < 3; ++q) {
      Realization phi;
      phi.states = {d.outcome[x][q][0] == 1 ? 0 : 1,
                    d.outcome[x][q][1] == 1 ? 0 : 1};
      phi.latent = 3 * x + q;
      support.push_back(std::move(phi));
      probs.push_back(d.joint[x][q]);
    }
  }
  Objective f = [d](ElementSet s, const Realization& phi) {
    const int x = phi.latent / 3;
    const int q = phi.latent % 3;
    // 1 minus the mass of the reconciled states, summed over the rejected
    // ones so that f(empty) is exactly 0.
    double value = 0.0;
    for (int xp = 0; xp < 2; ++xp) {
      bool reconciled = false;
      for (int qp = 0; qp < 3 && !reconciled; ++qp) {
        bool all = true;
        for (ElementId v : s.elements()) {
          if (d.outcome[xp][qp][v] != d.outcome[x][q][v]) all = false;
        }
        reconciled = all;
      }
      if (!reconciled) {
        for (int qq = 0; qq < 3; ++qq) value += d.joint[xp][qq];
      }
    }
    return value;
  };
  StateSpace space({2, 2}, {{"+1", "-1"}, {"+1", "-1"}});
  return TabularInstance{
      TabularPrior(std::move(space), std::move(support), std::move(probs)),
      std::move(f), "diagnosis"};
}

double SimplexQuadraticLhs(const std::vector<double>& p) {
  const int m = static_cast<int>(p.size());
  if (m < 2) throw Error(ErrorCode::kInvalidInput, "needs m >= 2");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
      throw Error(ErrorCode::kInvalidInput, "entries must lie in [0, 1]");
    }
    sum += x;
    sum_sq += x * x;
  }
  if (sum > 1.0 + 1e-12) {
    throw Error(ErrorCode::kInvalidInput, "entries must sum to at most 1");
  }
  // p^T (11^T - I) p = (sum p)^2 - |p|^2.
  return sum - static_cast<double>(m) / (m - 1) * (sum * sum - sum_sq);
}

FeatureInstance BuildCorrelatedPairInstance(int n, double a) {
  if (n < 3 || !(a > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "needs n >= 3 and a > 0");
  }
  FeatureInstance inst;
  inst.n = n;
  inst.m = n;
  inst.response.assign(n, a);
  inst.response[0] = 0.0;
  FiniteColumnPrior prior;
  for (int v = 0; v < n; ++v) {
    Column c(n, 0.0);
    if (v == 1) {
      c[0] = c[1] = 1.0 / std::sqrt(2.0);
    } else {
      c[v] = 1.0;
    }
    prior.per_feature.push_back({ColumnPoint{c, 1.0}});
  }
  inst.prior = std::move(prior);
  inst.Validate();
  return inst;
}

TabularInstance RandomSmallInstance(std::uint64_t seed) {
  Rng rng(seed);
  const int type = static_cast<int>(rng.UniformInt(5));
  if (type < 4) {
    const ModelKind kinds[] = {ModelKind::kIc, ModelKind::kLt,
                               ModelKind::kExtendedLt, ModelKind::kTriggering};
    const int n_src = 2 + static_cast<int>(rng.UniformInt(3));
    const int n_sink = 1 + static_cast<int>(rng.UniformInt(3));
    InfluenceInstance inf =
        GenRandomSmall(kinds[type], n_src, n_sink, MixSeed(seed, 1));
    TabularInstance t = ToTabular(inf);
    t.name = "infmax-" + ModelKindName(kinds[type]);
    return t;
  }
  const int n = 2 + static_cast<int>(rng.UniformInt(3));
  const int m = 2 + static_cast<int>(rng.UniformInt(4));
  TabularInstance t =
      ToTabular(GenRandomFinite(n, m, 2, true, MixSeed(seed, 1)));
  t.name = "features";
  return t;
}

namespace {

bool VerifyTightGap(const VerifyOptions& opt, Report& r) {
  // Grid with pM = 1, where the closed forms are exact.
  const int k = 2;
  for (int m : {1, 2, 5}) {
    for (double a : {1.0, 2.0, 5.0}) {
      if (a > m) continue;
      TightGapParams q{k, a, m, 1.0 / m};
      TightGapCase c = BuildTightGap(q);
      ObservationLattice lattice(c.instance, opt.cap);
      const int n = c.instance.prior.num_elements();
      const double gamma = GammaAdaptive(lattice, {}, k, opt.cap).value;
      const double beta =
          BetaNonadaptive(ExpectedObjective(lattice), n, ElementSet(), k,
                          lattice.zero_tol(), opt.cap)
              .value;
      const double gap = AdaptivityGapExact(lattice, k, opt.cap).value;
      const std::string tag = "k=2 a=" + Num(a) + " M=" + std::to_string(m) +
                              " p=" + Num(q.p) + ": ";
      r.Check(tag + Compare("gamma", gamma, c.gamma), Near(gamma, c.gamma));
      r.Check(tag + Compare("beta", beta, c.beta), Near(beta, c.beta));
      r.Check(tag + Compare("GAP", gap, c.gap), Near(gap, c.gap));
      r.Check(tag + Compare("GAP", gap, beta * gamma) + " vs beta*gamma",
              Near(gap, beta * gamma));
    }
  }
  // With pM < 1 the closed-form gamma is only an upper bound: the policy
  // "u, stop on state 0, else pick from V_y" has a smaller ratio.
  TightGapParams q{2, 10.0, 5, 0.1};
  TightGapCase c = BuildTightGap(q);
  ObservationLattice lattice(c.instance, opt.cap);
  const double gamma = GammaAdaptive(lattice, {}, 2, opt.cap).value;
  const double beta =
      BetaNonadaptive(ExpectedObjective(lattice),
                      c.instance.prior.num_elements(), ElementSet(), 2,
                      lattice.zero_tol(), opt.cap)
          .value;
  const double gap = AdaptivityGapExact(lattice, 2, opt.cap).value;
  r.Note("k=2 a=10 M=5 p=0.1: gamma = " + Num(gamma) + ", closed form " +
         Num(c.gamma) + " (exact only when pM = 1)");
  r.Check("k=2 a=10 M=5 p=0.1: gamma <= closed form", gamma <= c.gamma + 1e-9);
  r.Check("k=2 a=10 M=5 p=0.1: " + Compare("beta", beta, c.beta),
          Near(beta, c.beta));
  r.Check("k=2 a=10 M=5 p=0.1: " + Compare("GAP", gap, c.gap),
          Near(gap, c.gap));
  r.Check("k=2 a=10 M=5 p=0.1: GAP >= beta*gamma", gap >= beta * gamma - 1e-9);
  return true;
}

bool VerifyKusner(const VerifyOptions& opt, Report& r) {
  for (int k : {2, 3}) {
    for (int m : {3, 5}) {
      KusnerParams q{k, m, 0.1};
      TabularInstance inst = BuildKusner(q);
      ObservationLattice lattice(inst, opt.cap);
      const std::string tag =
          "k=" + std::to_string(k) + " M=" + std::to_string(m) + ": ";
      const double greedy = AvgValue(inst, GreedyPolicyTree(lattice, k)).value;
      const double opt_value =
          OptimalPolicyExhaustive(lattice, k, opt.cap).value;
      r.Check(tag + Compare("greedy f_avg", greedy, k * (1 + q.eps)),
              Near(greedy, k * (1 + q.eps)));
      r.Check(tag + Compare("optimal f_avg", opt_value, 1.0 + (k - 1) * m),
              Near(opt_value, 1.0 + (k - 1) * m));
      GreedyRun run = AdaptiveGreedy(lattice, k, inst.prior.realization(0));
      bool picks_z = true;
      for (int i = 0; i < k; ++i) picks_z &= run.selected[i] == 1 + i;
      r.Check(tag + "greedy selects z_1..z_k", picks_z);
      // The set-ratio constant of Delta(.|psi) is 1 for every history.
      const int n = inst.prior.num_elements();
      double min_ratio = GammaNonadaptive(
                             [&](ElementSet s) {
                               return lattice.ExpectedValue(lattice.root(), s);
                             },
                             n, ElementSet(), k, lattice.zero_tol(), opt.cap)
                             .value;
      for (int y = 0; y < m; ++y) {
        const auto node = lattice.Find(PartialRealization{{0, y}});
        const ElementSet dom = lattice.Dom(*node);
        min_ratio = std::min(
            min_ratio, GammaNonadaptive(
                           [&](ElementSet s) {
                             return lattice.ExpectedValue(*node, s | dom);
                           },
                           n, ElementSet(), k, lattice.zero_tol(), opt.cap)
                           .value);
      }
      r.Check(tag + Compare("set ratio of Delta(.|psi)", min_ratio, 1.0),
              Near(min_ratio, 1.0));
      r.Check(tag + "not adaptive submodular",
              !CheckAdaptiveSubmodular(inst, opt.cap).holds);
    }
  }
  return true;
}

bool VerifyDiagnosis(const VerifyOptions& opt, Report& r) {
  TabularInstance inst = BuildDiagnosis();
  const double g0 = GainElement(inst, 1, {}).value;
  const double g1 = GainElement(inst, 1, PartialRealization{{0, 1}}).value;
  ObservationLattice lattice(inst, opt.cap);
  const double zeta = ZetaStar(lattice, opt.cap).value;
  r.Check(Compare("Delta(v2|{})", g0, 0.0), g0 == 0.0);
  r.Check(Compare("Delta(v2|{(v1,-1)})", g1, 0.5), g1 == 0.5);
  r.Check(Compare("zeta*", zeta, std::numeric_limits<double>::infinity()),
          std::isinf(zeta) && zeta > 0);
  r.Check("adaptive monotone", CheckAdaptiveMonotone(inst, opt.cap).holds);
  return true;
}

bool VerifyChain(const VerifyOptions& opt, Report& r) {
  for (int ell : {1, 2, 3}) {
    for (double eps : {0.25, 0.5}) {
      ChainParams q{ell, eps};
      ChainCase c = BuildChain(q, opt.cap);
      const std::string tag =
          "l=" + std::to_string(ell) + " eps=" + Num(eps) + ": ";
      const double gain_pi = GainPolicy(c.instance, c.policy, {}).value;
      const double want_pi = ell + 1 + eps * ell;
      r.Check(tag + Compare("Delta(pi|{})", gain_pi, want_pi),
              Near(gain_pi, want_pi));
      const double gain_u0 = GainElement(c.instance, ChainU(q, 0), {}).value;
      const double want_u0 = (1.0 - std::pow(1.0 - eps, ell + 1)) / eps;
      r.Check(tag + Compare("Delta(u_0|{})", gain_u0, want_u0),
              Near(gain_u0, want_u0));
      bool v_ok = true;
      for (int i = 1; i <= ell; ++i) {
        const double g = GainElement(c.instance, ChainV(q, i), {}).value;
        v_ok &= Near(g, 2.0 - std::pow(1.0 - eps, ell - i + 1));
      }
      r.Check(tag + "Delta(v_i|{}) = 2 - (1-eps)^(l-i+1)", v_ok);
      const RatioTerms pi_ratio = PolicyRatio(c.instance, {}, c.policy);
      r.Check(tag + "ratio of pi " + Num(pi_ratio.ratio) + " <= bound " +
                  Num(c.bound),
              pi_ratio.ratio <= c.bound + 1e-9);
      ObservationLattice lattice(c.instance, opt.cap);
      const double gamma = GammaAdaptive(lattice, {}, ell, opt.cap).value;
      r.Check(tag + "gamma_{{},l} " + Num(gamma) + " <= bound " + Num(c.bound),
              gamma <= c.bound + 1e-9);
      r.Check(tag + "adaptive monotone",
              CheckAdaptiveMonotone(c.instance, opt.cap).holds);
    }
  }
  auto bound = [](int ell, double eps) {
    return (1.0 / eps + 2.0 * eps * ell) / (ell + eps * ell + 1.0);
  };
  r.Check("bound(16, 1/4) = " + Num(bound(16, 0.25)) +
              " < bound(4, 1/2) = " + Num(bound(4, 0.5)),
          bound(16, 0.25) < bound(4, 0.5));
  return true;
}

bool VerifyCorrelatedPair(const VerifyOptions& opt, Report& r) {
  for (double a : {1.0, 2.0}) {
    const int n = 4;
    FeatureInstance inst = BuildCorrelatedPairInstance(n, a);
    const std::string tag = "n=4 a=" + Num(a) + ": ";
    auto residual = [&](std::vector<int> s) {
      std::vector<Column> cols;
      for (int v : s) cols.push_back(inst.MeanColumn(v));
      return Dot(inst.response, inst.response) - R2Value(cols, inst.response);
    };
    const double a2 = a * a;
    r.Check(tag + Compare("residual {3,4}", residual({2, 3}), a2),
            Near(residual({2, 3}), a2));
    r.Check(tag + Compare("residual {1,3,4}", residual({0, 2, 3}), a2),
            Near(residual({0, 2, 3}), a2));
    r.Check(tag + Compare("residual {2,3,4}", residual({1, 2, 3}), a2 / 2),
            Near(residual({1, 2, 3}), a2 / 2));
    const double gain = residual({1, 2, 3}) - residual({0, 1, 2, 3});
    r.Check(tag + Compare("gain of 1 given {2,3,4}", gain, a2 / 2),
            Near(gain, a2 / 2));
    const auto [lo, hi] = SymEigenExtremes(Gram(
        DenseMatrix::FromColumns({inst.MeanColumn(0), inst.MeanColumn(1)})));
    r.Check(tag + Compare("lambda_min of block", lo, 1 - 1 / std::sqrt(2.0)),
            Near(lo, 1 - 1 / std::sqrt(2.0)));
    r.Check(tag + Compare("lambda_max of block", hi, 1 + 1 / std::sqrt(2.0)),
            Near(hi, 1 + 1 / std::sqrt(2.0)));
    TabularInstance tab = ToTabular(inst);
    ObservationLattice lattice(tab, opt.cap);
    const double zeta = ZetaStar(lattice, opt.cap).value;
    r.Check(tag + "zeta* = " + Num(zeta), std::isinf(zeta) && zeta > 0);
    const double floor = 1.0 / (3.0 + 2.0 * std::sqrt(2.0));
    const double bound = GapLowerBound(inst, n);
    r.Check(tag + "lambda_min/lambda_max " + Num(bound) + " >= " + Num(floor),
            bound >= floor - 1e-9);
    for (int k = 1; k <= n; ++k) {
      const double gamma = GammaAdaptive(lattice, {}, k, opt.cap).value;
      r.Check(tag + "gamma_{{}," + std::to_string(k) + "} " + Num(gamma) +
                  " >= " + Num(floor),
              gamma >= floor - 1e-9);
    }
  }
  return true;
}

bool VerifySimplexQuadratic(const VerifyOptions& opt, Report& r) {
  Rng rng(MixSeed(opt.seed, 0xb2));
  double min_lhs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.samples; ++i) {
    const int m = 2 + static_cast<int>(rng.UniformInt(7));
    // Normalized exponentials with one slack coordinate: uniform on the
    // simplex {p >= 0, sum p <= 1}.
    std::vector<double> e(m + 1);
    double total = 0.0;
    for (double& x : e) {
      x = -std::log(1.0 - rng.Uniform());
      total += x;
    }
    std::vector<double> p(m);
    for (int j = 0; j < m; ++j) p[j] = e[j] / total;
    min_lhs = std::min(min_lhs, SimplexQuadraticLhs(p));
  }
  r.Check(std::to_string(opt.samples) +
              " random vectors, min LHS = " + Num(min_lhs) + " >= -1e-12",
          min_lhs >= -1e-12);
  for (int m = 2; m <= 8; ++m) {
    const double lhs = SimplexQuadraticLhs(std::vector<double>(m, 1.0 / m));
    r.Check("m=" + std::to_string(m) + " uniform 1/m: LHS = " + Num(lhs),
            std::fabs(lhs) <= 1e-12);
  }
  r.Check("p = (1, 0): LHS = " + Num(SimplexQuadraticLhs({1.0, 0.0})),
          Near(SimplexQuadraticLhs({1.0, 0.0}), 1.0));
  return true;
}

bool VerifyGreedyBound(const VerifyOptions& opt, Report& r) {
  int failures = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.instances; ++i) {
    TabularInstance inst = RandomSmallInstance(MixSeed(opt.seed, i));
    ObservationLattice lattice(inst, opt.cap);
    const int n = inst.prior.num_elements();
    for (int t = 1; t <= 3 && t <= n; ++t) {
      const double greedy = AvgValue(inst, GreedyPolicyTree(lattice, t)).value;
      const double best = OptimalPolicyExhaustive(lattice, t, opt.cap).value;
      const double gamma = GammaLevel(lattice, t, t, opt.cap).value;
      const double rhs = (1.0 - std::exp(-gamma)) * best;
      const double slack = greedy - rhs;
      min_slack = std::min(min_slack, slack);
      if (slack < -1e-9 * std::max(1.0, std::fabs(best))) {
        ++failures;
        r.Check("instance " + std::to_string(i) + " (" + inst.name +
                    ") l=k=" + std::to_string(t) + ": greedy " + Num(greedy) +
                    " < " + Num(rhs),
                false);
      }
    }
  }
  r.Check(std::to_string(opt.instances) +
              " random instances, l=k in {1,2,3}: min slack " + Num(min_slack),
          failures == 0);
  return true;
}

bool VerifyGapBoundCase(const VerifyOptions& opt, Report& r) {
  int failures = 0;
  for (int i = 0; i < opt.instances; ++i) {
    TabularInstance inst = RandomSmallInstance(MixSeed(opt.seed, i));
    ObservationLattice lattice(inst, opt.cap);
    for (int k : {2, 3}) {
      if (k > inst.prior.num_elements()) continue;
      GapBoundReport g = VerifyGapBound(lattice, k, opt.cap);
      if (!g.holds) {
        ++failures;
        r.Check("instance " + std::to_string(i) + " k=" + std::to_string(k) +
                    ": GAP " + Num(g.gap) + " < beta*gamma " +
                    Num(g.beta * g.gamma),
                false);
      }
    }
  }
  r.Check(std::to_string(opt.instances) +
              " random instances, k in {2,3}: GAP >= beta*gamma",
          failures == 0);
  return true;
}

bool VerifyZetaGamma(const VerifyOptions& opt, Report& r) {
  int failures = 0;
  for (int i = 0; i < opt.instances; ++i) {
    TabularInstance inst = RandomSmallInstance(MixSeed(opt.seed, i));
    ObservationLattice lattice(inst, opt.cap);
    ZetaGammaReport z = VerifyZetaVsGamma(lattice, 2, opt.cap);
    if (!z.holds) {
      ++failures;
      r.Check("instance " + std::to_string(i) + ": 1/zeta* " +
                  Num(1.0 / z.zeta) + " > gamma " + Num(z.min_gamma),
              false);
    }
  }
  r.Check(std::to_string(opt.instances) +
              " random instances, k=2: 1/zeta* <= min gamma",
          failures == 0);
  return true;
}

}  // namespace

const std::vector<std::string>& VerificationCases() {
  static const std::vector<std::string> kCases = {
      "tightgap", "kusner",       "ygo",       "chain",        "f4",
      "lemma-b2", "greedy-bound", "gap-bound", "zeta-vs-gamma"};
  return kCases;
}

bool RunVerification(const std::string& name, const VerifyOptions& options,
                     std::ostream& out) {
  using Verifier = bool (*)(const VerifyOptions&, Report&);
  const std::pair<const char*, Verifier> table[] = {
      {"tightgap", VerifyTightGap},
      {"kusner", VerifyKusner},
      {"ygo", VerifyDiagnosis},
      {"chain", VerifyChain},
      {"f4", VerifyCorrelatedPair},
      {"lemma-b2", VerifySimplexQuadratic},
      {"greedy-bound", VerifyGreedyBound},
      {"gap-bound", VerifyGapBoundCase},
      {"zeta-vs-gamma", VerifyZetaGamma},
  };
  for (const auto& [case_name, verifier] : table) {
    if (name != case_name) continue;
    out << "verify " << name << "\n";
    Report report(out);
    verifier(options, report);
    return report.Finish(name);
  }
  std::string known;
  for (const std::string& c : VerificationCases()) known += " " + c;
  throw Error(ErrorCode::kUnknownCase,
              "unknown case '" + name + "'; expected one of:" + known);
}

}  // namespace adasub
