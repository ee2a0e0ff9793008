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

#include "adasub/brute.h"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "adasub/policies.h"

namespace adasub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckCap(std::int64_t count, std::int64_t cap, const char* what) {
  if (count > cap) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::string(what) + " exceeds cap " + std::to_string(cap));
  }
}

// Minimizes num(pi) - gamma * den(pi) over trees of height <= k rooted at a
// fixed history psi', where both terms are reach-weighted sums over the
// tree's nodes: num uses Delta(v|psi'), den uses Delta(v|node).
class ParametricSolver {
 public:
  ParametricSolver(ObservationLattice& lattice, ObservationLattice::NodeId root,
                   int k, std::int64_t cap, std::int64_t* visited)
      : lattice_(lattice), root_(root), k_(k), cap_(cap), visited_(visited) {
    const int n = lattice.num_elements();
    root_gain_.resize(n);
    for (int v = 0; v < n; ++v) root_gain_[v] = lattice.Gain(root, v);
  }

  double Minimize(double gamma) {
    gamma_ = gamma;
    memo_.clear();
    return Value(root_, k_);
  }

  // The argmin tree of the last Minimize call with its two sums.
  PolicyWitness Witness() {
    PolicyWitness w;
    w.psi = lattice_.ToPartial(root_);
    w.policy = Build(root_, k_, &w.numerator, &w.denominator);
    return w;
  }

 private:
  struct Choice {
    double value = 0.0;
    ElementId element = -1;
  };

  Choice Best(ObservationLattice::NodeId node, int depth) {
    Choice best;
    if (depth == 0) return best;
    const ElementSet dom = lattice_.Dom(node);
    for (int v = 0; v < lattice_.num_elements(); ++v) {
      if (dom.contains(v)) continue;
      double value = root_gain_[v] - gamma_ * lattice_.Gain(node, v);
      for (const auto& b : lattice_.Branches(node, v)) {
        value += b.prob * Value(b.child, depth - 1);
      }
      if (value < best.value) best = {value, v};
    }
    return best;
  }

  double Value(ObservationLattice::NodeId node, int depth) {
    if (depth == 0) return 0.0;
    const std::int64_t key = static_cast<std::int64_t>(node) * (k_ + 1) + depth;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;
    CheckCap(++*visited_, cap_, "ratio search");
    const Choice c = Best(node, depth);
    memo_.emplace(key, c);
    return c.value;
  }

  PolicyTree Build(ObservationLattice::NodeId node, int depth, double* num,
                   double* den) {
    *num = 0.0;
    *den = 0.0;
    if (depth == 0) return PolicyTree::Leaf();
    Value(node, depth);
    const Choice c =
        memo_.at(static_cast<std::int64_t>(node) * (k_ + 1) + depth);
    if (c.element < 0) return PolicyTree::Leaf();
    const ElementId v = c.element;
    *num = root_gain_[v];
    *den = lattice_.Gain(node, v);
    PolicyTree::Children children;
    for (const auto& b : lattice_.Branches(node, v)) {
      double cn = 0.0, cd = 0.0;
      children.emplace(b.state, Build(b.child, depth - 1, &cn, &cd));
      *num += b.prob * cn;
      *den += b.prob * cd;
    }
    return PolicyTree::Node(v, std::move(children));
  }

  ObservationLattice& lattice_;
  ObservationLattice::NodeId root_;
  int k_;
  std::int64_t cap_;
  std::int64_t* visited_;
  double gamma_ = 1.0;
  std::vector<double> root_gain_;
  std::unordered_map<std::int64_t, Choice> memo_;
};

// gamma at a single history psi'.
PolicyWitness GammaAtNode(ObservationLattice& lattice,
                          ObservationLattice::NodeId node, int k,
                          std::int64_t cap, std::int64_t* visited,
                          double* value) {
  PolicyWitness best;
  best.psi = lattice.ToPartial(node);
  *value = 1.0;
  if (k <= 0) return best;
  const double tol = lattice.zero_tol();
  ParametricSolver solver(lattice, node, k, cap, visited);
  double gamma = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = solver.Minimize(gamma);
    if (f >= -tol) break;
    PolicyWitness w = solver.Witness();
    if (!(w.denominator > tol)) break;
    const double ratio = w.numerator / w.denominator;
    if (!(ratio < gamma)) break;
    gamma = ratio;
    best = std::move(w);
  }
  *value = gamma;
  return best;
}

double Ratio(double num, double den, double tol) {
  if (std::abs(den) <= tol) return std::abs(num) <= tol ? 1.0 : kInf;
  return num / den;
}

}  // namespace

std::string MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kGammaAdaptive:
      return "gamma_adaptive";
    case MetricKind::kGammaLevel:
      return "gamma_level";
    case MetricKind::kGammaNonadaptive:
      return "gamma_nonadaptive";
    case MetricKind::kBeta:
      return "beta";
    case MetricKind::kZetaStar:
      return "zeta_star";
    case MetricKind::kGap:
      return "gap";
  }
  return "unknown";
}

MetricReport GammaAdaptive(ObservationLattice& lattice,
                           const PartialRealization& psi, int k,
                           std::int64_t cap) {
  if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative budget");
  if (psi.size() >= 63)
    throw Error(ErrorCode::kInvalidInput, "history too long");
  MetricReport report;
  report.kind = MetricKind::kGammaAdaptive;
  const std::uint64_t subsets = std::uint64_t{1} << psi.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const PartialRealization sub = psi.SubsetByMask(mask);
    auto node = lattice.Find(sub);
    if (!node) {
      ++report.skipped_zero_probability;
      continue;
    }
    double value = 1.0;
    PolicyWitness w =
        GammaAtNode(lattice, *node, k, cap, &report.nodes_visited, &value);
    if (mask == 0 || value < report.value) {
      report.value = value;
      report.witness = std::move(w);
    }
  }
  return report;
}

MetricReport GammaLevel(ObservationLattice& lattice, int level, int k,
                        std::int64_t cap) {
  if (k < 0 || level < 0) {
    throw Error(ErrorCode::kInvalidInput, "negative budget or level");
  }
  MetricReport report;
  report.kind = MetricKind::kGammaLevel;
  bool first = true;
  for (ObservationLattice::NodeId node : lattice.NodesUpToDepth(level)) {
    double value = 1.0;
    PolicyWitness w =
        GammaAtNode(lattice, node, k, cap, &report.nodes_visited, &value);
    if (first || value < report.value) {
      report.value = value;
      report.witness = std::move(w);
      first = false;
    }
  }
  return report;
}

RatioTerms PolicyRatio(const TabularInstance& inst,
                       const PartialRealization& psi,
                       const PolicyTree& policy) {
  const TabularPrior post = Condition(inst.prior, psi);
  const int n = inst.prior.num_elements();
  std::vector<double> reach(n, 0.0);
  for (int i = 0; i < post.size(); ++i) {
    const ElementSet chosen = RunPolicy(policy, post.realization(i)).selected;
    for (ElementId v : chosen.elements()) reach[v] += post.prob(i);
  }
  RatioTerms t;
  for (int v = 0; v < n; ++v) {
    if (reach[v] == 0.0) continue;
    t.numerator += reach[v] * GainElement(inst, v, psi).value;
  }
  t.denominator = GainPolicy(inst, policy, psi).value;
  t.ratio = Ratio(t.numerator, t.denominator, GainZeroTol(ValueScale(inst)));
  return t;
}

namespace {

void Enumerate(ObservationLattice& lattice, ObservationLattice::NodeId n, int k,
               std::int64_t cap, std::vector<PolicyTree>& out) {
  out.push_back(PolicyTree::Leaf());
  if (k == 0) return;
  const ElementSet dom = lattice.Dom(n);
  for (int v = 0; v < lattice.num_elements(); ++v) {
    if (dom.contains(v)) continue;
    const std::vector<ObservationLattice::Branch> branches =
        lattice.Branches(n, v);
    std::vector<std::vector<PolicyTree>> options(branches.size());
    for (std::size_t j = 0; j < branches.size(); ++j) {
      Enumerate(lattice, branches[j].child, k - 1, cap, options[j]);
    }
    // Odometer over the per-branch choices.
    std::vector<std::size_t> pick(branches.size(), 0);
    while (true) {
      PolicyTree::Children children;
      for (std::size_t j = 0; j < branches.size(); ++j) {
        children.emplace(branches[j].state, options[j][pick[j]]);
      }
      out.push_back(PolicyTree::Node(v, std::move(children)));
      CheckCap(static_cast<std::int64_t>(out.size()), cap,
               "policy enumeration");
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == options[j].size()) {
        pick[j] = 0;
        ++j;
      }
      if (j == pick.size()) break;
    }
  }
}

}  // namespace

std::vector<PolicyTree> EnumeratePolicies(ObservationLattice& lattice,
                                          ObservationLattice::NodeId n, int k,
                                          std::int64_t cap) {
  std::vector<PolicyTree> out;
  Enumerate(lattice, n, k, cap, out);
  return out;
}

std::int64_t CountPolicies(ObservationLattice& lattice,
                           ObservationLattice::NodeId n, int k) {
  std::int64_t count = 1;
  if (k == 0) return count;
  const ElementSet dom = lattice.Dom(n);
  for (int v = 0; v < lattice.num_elements(); ++v) {
    if (dom.contains(v)) continue;
    std::int64_t product = 1;
    for (const auto& b : lattice.Branches(n, v)) {
      product *= CountPolicies(lattice, b.child, k - 1);
    }
    count += product;
  }
  return count;
}

MetricReport GammaAdaptiveByEnumeration(const TabularInstance& inst,
                                        const PartialRealization& psi, int k,
                                        std::int64_t cap) {
  ObservationLattice lattice(inst, cap);
  const double tol = GainZeroTol(ValueScale(inst));
  MetricReport report;
  report.kind = MetricKind::kGammaAdaptive;
  report.witness = PolicyWitness{};
  const std::uint64_t subsets = std::uint64_t{1} << psi.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const PartialRealization sub = psi.SubsetByMask(mask);
    auto node = lattice.Find(sub);
    if (!node) {
      ++report.skipped_zero_probability;
      continue;
    }
    for (const PolicyTree& pi : EnumeratePolicies(lattice, *node, k, cap)) {
      ++report.nodes_visited;
      const RatioTerms t = PolicyRatio(inst, sub, pi);
      if (std::abs(t.denominator) <= tol && std::abs(t.numerator) > tol) {
        continue;
      }
      if (t.ratio < report.value) {
        report.value = t.ratio;
        report.witness = PolicyWitness{sub, pi, t.numerator, t.denominator};
      }
    }
  }
  return report;
}

namespace {

template <typename RatioFn>
MetricReport SetRatio(MetricKind kind, const SetValue& g, int n, ElementSet u,
                      int k, double zero_tol, std::int64_t cap, RatioFn fn) {
  const ElementSet all = ElementSet::All(n);
  if (!u.IsSubsetOf(all)) {
    throw Error(ErrorCode::kInvalidInput, "U outside the ground set");
  }
  MetricReport report;
  report.kind = kind;
  report.witness = SetWitness{};
  std::vector<double> single(n);
  // Submasks of U, starting from U itself and ending at the empty set.
  std::uint64_t l = u.mask();
  while (true) {
    const ElementSet base(l);
    const double g_base = g(base);
    for (int v = 0; v < n; ++v) {
      single[v] = base.contains(v) ? 0.0 : g(base.with(v)) - g_base;
    }
    const std::uint64_t rest = all.mask() & ~l;
    for (std::uint64_t s = rest; s != 0; s = (s - 1) & rest) {
      const ElementSet set(s);
      if (set.size() > k) continue;
      CheckCap(++report.nodes_visited, cap, "set ratio enumeration");
      double sum = 0.0;
      for (ElementId v : set.elements()) sum += single[v];
      const double joint = g(base | set) - g_base;
      double num = 0.0, den = 0.0;
      fn(sum, joint, &num, &den);
      if (std::abs(den) <= zero_tol && std::abs(num) > zero_tol) continue;
      const double r = Ratio(num, den, zero_tol);
      if (r < report.value) {
        report.value = r;
        report.witness = SetWitness{base, set, num, den};
      }
    }
    if (l == 0) break;
    l = (l - 1) & u.mask();
  }
  return report;
}

}  // namespace

MetricReport GammaNonadaptive(const SetValue& g, int n, ElementSet u, int k,
                              double zero_tol, std::int64_t cap) {
  return SetRatio(MetricKind::kGammaNonadaptive, g, n, u, k, zero_tol, cap,
                  [](double sum, double joint, double* num, double* den) {
                    *num = sum;
                    *den = joint;
                  });
}

MetricReport BetaNonadaptive(const SetValue& g, int n, ElementSet u, int k,
                             double zero_tol, std::int64_t cap) {
  return SetRatio(MetricKind::kBeta, g, n, u, k, zero_tol, cap,
                  [](double sum, double joint, double* num, double* den) {
                    *num = joint;
                    *den = sum;
                  });
}

MetricReport ZetaStar(ObservationLattice& lattice, std::int64_t cap) {
  const int n = lattice.num_elements();
  const double tol = lattice.zero_tol();
  MetricReport report;
  report.kind = MetricKind::kZetaStar;
  report.witness = PairWitness{};
  const std::vector<ObservationLattice::NodeId> order =
      lattice.NodesUpToDepth(n);
  // best[node * n + v]: node of the sub-history with the smallest gain of v.
  std::vector<ObservationLattice::NodeId> best(lattice.size() * n, -1);
  for (ObservationLattice::NodeId node : order) {
    const PartialRealization psi = lattice.ToPartial(node);
    const ElementSet dom = lattice.Dom(node);
    const std::uint64_t full = (std::uint64_t{1} << psi.size()) - 1;
    std::vector<ObservationLattice::NodeId> parents;
    for (int i = 0; i < psi.size(); ++i) {
      const std::uint64_t mask = full & ~(std::uint64_t{1} << i);
      if (auto parent = lattice.Find(psi.SubsetByMask(mask))) {
        parents.push_back(*parent);
      }
    }
    for (int v = 0; v < n; ++v) {
      if (dom.contains(v)) continue;
      CheckCap(++report.nodes_visited, cap, "zeta search");
      ObservationLattice::NodeId arg = node;
      double den = lattice.Gain(node, v);
      for (ObservationLattice::NodeId p : parents) {
        const ObservationLattice::NodeId cand = best[p * n + v];
        const double g = lattice.Gain(cand, v);
        if (g < den) {
          den = g;
          arg = cand;
        }
      }
      best[node * n + v] = arg;
      const double num = lattice.Gain(node, v);
      const double r = Ratio(num, den, tol);
      if (r > report.value) {
        report.value = r;
        report.witness = PairWitness{lattice.ToPartial(arg), psi, v, num, den};
        if (std::isinf(r)) return report;
      }
    }
  }
  return report;
}

MetricReport ZetaStarByEnumeration(ObservationLattice& lattice,
                                   std::int64_t cap) {
  const int n = lattice.num_elements();
  const double tol = lattice.zero_tol();
  MetricReport report;
  report.kind = MetricKind::kZetaStar;
  report.witness = PairWitness{};
  for (ObservationLattice::NodeId larger : lattice.NodesUpToDepth(n)) {
    const PartialRealization big = lattice.ToPartial(larger);
    const ElementSet dom = lattice.Dom(larger);
    const std::uint64_t subsets = std::uint64_t{1} << big.size();
    for (std::uint64_t mask = 0; mask + 1 < subsets; ++mask) {
      const PartialRealization small = big.SubsetByMask(mask);
      auto smaller = lattice.Find(small);
      if (!smaller) {
        ++report.skipped_zero_probability;
        continue;
      }
      for (int v = 0; v < n; ++v) {
        if (dom.contains(v)) continue;
        CheckCap(++report.nodes_visited, cap, "zeta enumeration");
        const double num = lattice.Gain(larger, v);
        const double den = lattice.Gain(*smaller, v);
        const double r = Ratio(num, den, tol);
        if (r > report.value) {
          report.value = r;
          report.witness = PairWitness{small, big, v, num, den};
          if (std::isinf(r)) return report;
        }
      }
    }
  }
  return report;
}

SetValue ExpectedObjective(ObservationLattice& lattice) {
  return [&lattice](ElementSet s) {
    return lattice.ExpectedValue(lattice.root(), s);
  };
}

MetricReport AdaptivityGapExact(ObservationLattice& lattice, int k,
                                std::int64_t cap) {
  const int n = lattice.num_elements();
  if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative budget");
  MetricReport report;
  report.kind = MetricKind::kGap;
  GapWitness w;
  w.nonadaptive_value = lattice.ExpectedValue(lattice.root(), ElementSet());
  const std::uint64_t all = ElementSet::All(n).mask();
  for (std::uint64_t s = all;; s = (s - 1) & all) {
    const ElementSet set(s);
    if (set.size() <= k) {
      CheckCap(++report.nodes_visited, cap, "subset enumeration");
      const double value = lattice.ExpectedValue(lattice.root(), set);
      if (value > w.nonadaptive_value ||
          (value == w.nonadaptive_value && s < w.set.mask())) {
        w.nonadaptive_value = value;
        w.set = set;
      }
    }
    if (s == 0) break;
  }
  const OptimalPolicy opt = OptimalPolicyExhaustive(lattice, k, cap);
  report.nodes_visited += opt.nodes_visited;
  w.adaptive_value = opt.value;
  w.adaptive_policy = opt.tree;
  report.value =
      opt.value <= lattice.zero_tol() ? 1.0 : w.nonadaptive_value / opt.value;
  report.witness = w;
  return report;
}

GapBoundReport VerifyGapBound(ObservationLattice& lattice, int k,
                              std::int64_t cap) {
  GapBoundReport r;
  r.gap = AdaptivityGapExact(lattice, k, cap).value;
  r.beta = BetaNonadaptive(ExpectedObjective(lattice), lattice.num_elements(),
                           ElementSet(), k, lattice.zero_tol(), cap)
               .value;
  r.gamma = GammaAdaptive(lattice, PartialRealization(), k, cap).value;
  r.holds = r.gap >= r.beta * r.gamma - 1e-9;
  return r;
}

ZetaGammaReport VerifyZetaVsGamma(ObservationLattice& lattice, int k,
                                  std::int64_t cap) {
  ZetaGammaReport r;
  r.zeta = ZetaStar(lattice, cap).value;
  r.min_gamma = GammaLevel(lattice, lattice.num_elements(), k, cap).value;
  r.holds = 1.0 / r.zeta <= r.min_gamma + 1e-9;
  return r;
}

}  // namespace adasub
