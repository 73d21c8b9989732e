// Copyright 2026 The sqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace sqkd {

/// SplitMix64 step. Advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based seed split: the seed of stream `index` under `master`.
/// Pure function of its arguments, so trial seeds never depend on
/// execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded uniform source. All sampling goes through explicit bit
/// manipulation of the engine output, so results are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(next() >> 63); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqkd
