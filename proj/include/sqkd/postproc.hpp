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
#include <stdexcept>
#include <vector>

namespace sqkd::postproc {

using Bits = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultSecurityMargin = 8;

struct ReconcileOptions {
  int rounds = 4;
  /// First-round block size; later rounds double it.
  std::size_t initial_block_size = 7;
};

/// Initial block size 0.5/qber, floored at 2; 64 when qber is 0.
std::size_t block_size_for_qber(double qber);

struct ReconciliationReport {
  Bits corrected_key;              // Bob's key after corrections
  std::size_t parity_exchanges = 0;
  std::size_t leaked_bits = 0;     // one per disclosed parity, capped at n
  std::size_t corrections = 0;
  bool residual_mismatch = false;
  std::vector<std::size_t> mismatches_after_round;
};

/// Cascade-style reconciliation of key_B towards key_A. Round 0 uses the
/// identity order; later rounds use a permutation drawn from `seed`. Each
/// mismatched block is bisected to one error, and the correction is pushed
/// back into every earlier round's blocks. Disclosure stops once n parities
/// have been revealed. Throws std::invalid_argument on length mismatch.
ReconciliationReport reconcile(const Bits& key_A, const Bits& key_B,
                               const ReconcileOptions& options,
                               std::uint64_t seed);

class KeyExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AmplifiedKey {
  Bits key;
};

/// n - leaked - margin; throws KeyExhausted unless that is at least 1.
std::size_t amplified_length(std::size_t n, std::size_t leaked_bits,
                             std::size_t security_margin);

/// Multiplies the key by an m x n binary Toeplitz matrix over GF(2). Row
/// and column entries come from m + n - 1 bits drawn from `seed`.
AmplifiedKey privacy_amplify(const Bits& key, std::size_t leaked_bits,
                             std::size_t security_margin, std::uint64_t seed);

}  // namespace sqkd::postproc
