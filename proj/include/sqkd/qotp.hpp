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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sqkd/qsim.hpp"
#include "sqkd/random.hpp"

namespace sqkd::qotp {

/// Pad bits for X^a Z^b on one qubit.
struct PadKey {
  std::uint8_t a = 0;
  std::uint8_t b = 0;

  friend bool operator==(const PadKey&, const PadKey&) = default;
};

PadKey random_key(Rng& rng);

/// Raised when a key update is requested for a gate outside the Clifford set.
class NonCliffordGate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// X^a Z^b on `target`: Z is applied first.
qsim::StateVector encrypt(const qsim::StateVector& state, PadKey key,
                          int target);

/// Inverse of encrypt: X^a first, then Z^b.
qsim::StateVector decrypt(const qsim::StateVector& state, PadKey key,
                          int target);

/// Keys k' with G X^a Z^b = X^a' Z^b' G up to global phase.
///
/// `keys` holds one key per qubit the gate touches: {target} for the
/// single-qubit gates, {control, target} for CNOT. The result has the same
/// layout. Throws NonCliffordGate for R.
std::vector<PadKey> key_update_clifford(const qsim::Gate& gate,
                                        std::span<const PadKey> keys);

}  // namespace sqkd::qotp
