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

#ifndef ADASUB_CASES_H_
#define ADASUB_CASES_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adasub/core.h"
#include "adasub/features.h"
#include "adasub/policy_tree.h"

namespace adasub {

// Instance with an adaptivity gap equal to beta * gamma. Element 0 is u with
// states 0..M; elements 1 + (i - 1) k .. i k form the block V_i (one state
// each). Pr[phi(u) = y] = p for y >= 1 and 1 - pM for y = 0, and
//   f(S) = 1 + a |S n V_phi(u)|   if u in S,
//          1 + ap (|S| - 1)       if u not in S, S nonempty,
//          0                      if S is empty.
struct TightGapParams {
  int k = 2;
  double a = 1.0;
  int m = 1;
  double p = 1.0;
};

struct TightGapCase {
  TabularInstance instance;
  // Closed forms (1 + (k-1)ap)/k, k/(1 + (k-1)apM) and their product. The
  // gamma form is attained only when pM = 1 and the beta form needs ap <= 1;
  // otherwise the exact values are smaller.
  double beta = 0.0;
  double gamma = 0.0;
  double gap = 0.0;
};

// Throws kInvalidParams unless k >= 1, M >= 1, a >= 0, 0 <= p <= 1/M and
// apM >= 1 (so that the closed-form gamma lies in (0, 1]).
TightGapCase BuildTightGap(const TightGapParams& params);

// Greedy-trap instance for ratio bounds over sets. Element 0 is u with M
// states, elements 1..k are z_1..z_k (one state), and v_i^y is element
// 1 + k + (i - 1) M + y for i in 1..k-1, y in 0..M-1 (states 0/1). Under
// phi_y (probability 1/M) u is in state y and v_i^y in state 1 for all i.
//   f(S) = [u in S] + (1 + eps)|S n Z| + M #{v_i^y in S with state 1}.
struct KusnerParams {
  int k = 2;
  int m = 3;
  double eps = 0.1;
};

TabularInstance BuildKusner(const KusnerParams& params);

// Chain of sinks u_0..u_l where u_i (i >= 1) has exactly one live in-edge:
// from v_i with probability eps or from u_{i-1} otherwise. Every vertex has
// weight 1 and is selectable. Selecting a vertex activates everything it
// reaches and reveals the out-edges of the activated vertices, so the state
// of u_i is the number of chain edges alive in a row after it and the state
// of v_i is 0 when its edge is dead, else 1 plus the state of u_i.
// Element ids: u_i is i, v_i is l + i.
struct ChainParams {
  int ell = 2;
  double eps = 0.5;
};

struct ChainCase {
  TabularInstance instance;
  // Select u_0; while u_l is inactive, select v_i for the first inactive
  // u_i. Height up to l + 1.
  PolicyTree policy;
  // (1/eps + 2 eps l) / (l + eps l + 1).
  double bound = 0.0;
};

// Throws kInvalidParams for l < 1 or eps outside (0, 1), kBudgetExceeded
// when 2^l exceeds `cap`.
ChainCase BuildChain(const ChainParams& params, std::int64_t cap = 1'000'000);

inline ElementId ChainU(const ChainParams&, int i) { return i; }
inline ElementId ChainV(const ChainParams& params, int i) {
  return params.ell + i;
}

// Group-based active diagnosis with two states, three modes and tests v1, v2
// (elements 0 and 1; state 0 is outcome +1, state 1 is outcome -1). The
// support point for (x, q) has latent tag 3x + q.
struct DiagnosisInstance {
  // outcome[x][q][v] in {+1, -1}.
  int outcome[2][3][2];
  double joint[2][3];
};

DiagnosisInstance DiagnosisTable();
// f(S, (x, q)) = 1 - sum over states x' that some mode q' reconciles with the
// observed outcomes on S of p(x').
TabularInstance BuildDiagnosis();

// 1^T p - m/(m-1) p^T (11^T - I) p. Throws kInvalidInput unless m >= 2,
// 0 <= p_i <= 1 and sum p <= 1 (within 1e-12).
double SimplexQuadraticLhs(const std::vector<double>& p);

// Deterministic feature instance with columns e_1, (e_1 + e_2)/sqrt(2),
// e_3..e_n and response (0, a, ..., a). Throws kInvalidParams for n < 3 or
// a <= 0.
FeatureInstance BuildCorrelatedPairInstance(int n = 4, double a = 1.0);

// Small random adaptive-monotone instance: an influence instance of any
// model (2..4 sources, 1..3 sinks) or a finite-support feature instance
// (2..4 features, 2..5 rows, 2 normalized points per feature).
TabularInstance RandomSmallInstance(std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Random instances for greedy-bound, gap-bound and zeta-vs-gamma.
  int instances = 50;
  // Random vectors for lemma-b2.
  int samples = 100'000;
  std::int64_t cap = 2'000'000;
};

// Names accepted by RunVerification.
const std::vector<std::string>& VerificationCases();

// Runs one verifier suite, printing one line per check and a final PASS or
// FAIL line. Returns true on PASS. Throws kUnknownCase.
bool RunVerification(const std::string& name, const VerifyOptions& options,
                     std::ostream& out);

}  // namespace adasub

#endif  // ADASUB_CASES_H_
