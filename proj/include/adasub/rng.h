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

#ifndef ADASUB_RNG_H_
#define ADASUB_RNG_H_

#include <cstdint>
#include <random>

namespace adasub {

// SplitMix64 finalizer. All child seeds in the project are derived with
// MixSeed so that a single root seed determines every random stream.
std::uint64_t SplitMix64(std::uint64_t x);

// Child seed for stream `index` under `seed`:
//   MixSeed(seed, index) = SplitMix64(seed ^ SplitMix64(index +
//   0x9e3779b97f4a7c15)).
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index);

// Seeded random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the transforms below are written out explicitly
// because the std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound), bound > 0. Rejection sampling, unbiased.
  std::uint64_t UniformInt(std::uint64_t bound);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via the Box-Muller transform (one draw per call; the
  // paired value is discarded to keep the stream position simple).
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace adasub

#endif  // ADASUB_RNG_H_
