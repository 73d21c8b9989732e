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
#include <optional>
#include <stdexcept>
#include <vector>

#include "sqkd/protocol_types.hpp"
#include "sqkd/random.hpp"

namespace sqkd::adversaries {

using protocol::Basis;
using protocol::Bits;
using protocol::Pauli;

inline constexpr std::size_t kMaxEnumerationQubits = 24;

class EnumerationCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// What a server-side adversary legitimately holds after a run. Built only
/// from CharlieLog and PublicRecord; Bob's private record is not an input.
struct AdversaryView {
  std::size_t total_qubits = 0;
  std::vector<Basis> alice_bases;
  std::vector<Pauli> gate_requests;     // first-pass receipts
  std::vector<Basis> measure_requests;  // second-pass receipts
  Bits outcomes;                        // per second-pass receipt
  std::vector<std::size_t> agreed_positions;
  std::vector<std::size_t> key_positions;
  std::vector<std::size_t> check_positions;
  Bits check_bits_bob;
  double keep_probability = 0.5;
  double measure_probability = 0.5;

  // Present only under the timing side channel.
  std::optional<std::vector<std::size_t>> first_pass_positions;
  std::optional<std::vector<std::size_t>> second_pass_receipts;
};

struct ViewOptions {
  bool timing_side_channel = false;
  double keep_probability = 0.5;
  double measure_probability = 0.5;
  double hop_time = 0.0;  // 1/rate + latency on a Bob<->Charlie hop
};

AdversaryView build_adversary_view(const protocol::CharlieLog& log,
                                   const protocol::PublicRecord& pub,
                                   const ViewOptions& options);

struct KeyBitPosterior {
  std::size_t position = 0;
  double p_one = 0.5;
  std::uint8_t guess = 0;  // argmax, ties resolved to 0
};

/// Exact posterior over Alice's bit at each key position, marginalizing all
/// order-preserving assignments of receipts to stream positions that are
/// consistent with the view, each weighted by the probability of Bob's coins
/// that produce it. Throws EnumerationCapExceeded above
/// kMaxEnumerationQubits.
std::vector<KeyBitPosterior> key_posteriors(const AdversaryView& view);

struct BayesianReport {
  std::vector<KeyBitPosterior> posteriors;
  Bits guesses;
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

/// Posterior-argmax guesses scored against the true key.
BayesianReport charlie_bayesian_guess(const AdversaryView& view,
                                      const Bits& true_key);

/// Baseline guesser with no view at all.
Bits coin_flip_guess(std::size_t count, Rng& rng);

}  // namespace sqkd::adversaries
