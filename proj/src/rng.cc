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

#include "adasub/rng.h"

#include <cmath>
#include <numbers>

#include "adasub/error.h"

namespace adasub {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "InvalidInput";
    case ErrorCode::kInconsistentObservation:
      return "InconsistentObservation";
    case ErrorCode::kElementReuse:
      return "ElementReuse";
    case ErrorCode::kMissingBranch:
      return "MissingBranch";
    case ErrorCode::kBudgetExceeded:
      return "BudgetExceeded";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNotSymmetric:
      return "NotSymmetric";
    case ErrorCode::kNoConvergence:
      return "NoConvergence";
    case ErrorCode::kInvalidParams:
      return "InvalidParams";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kDuplicateEdge:
      return "DuplicateEdge";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kUnknownCase:
      return "UnknownCase";
  }
  return "Unknown";
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ SplitMix64(index + 0x9e3779b97f4a7c15ULL));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformInt(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidInput, "UniformInt bound 0");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace adasub
