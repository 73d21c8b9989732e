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

#include <optional>
#include <vector>

#include "sqkd/adversaries.hpp"
#include "sqkd/channel.hpp"
#include "sqkd/protocol_types.hpp"
#include "sqkd/random.hpp"

namespace sqkd::protocol {

/// N uniform (basis, bit) preparations.
AliceRecord alice_prepare(const ProtocolParams& params, Rng& rng);

/// Empty means discard; otherwise the Pauli Bob asks Charlie to apply.
std::optional<Pauli> bob_first_pass(Rng& rng, double keep_probability = 0.5);

qsim::StateVector charlie_apply_gate(const qsim::StateVector& qubit,
                                     Pauli gate);

/// Empty means discard; otherwise the measurement basis Bob requests.
std::optional<Basis> bob_second_pass(Rng& rng,
                                     double measure_probability = 0.5);

int charlie_measure(const qsim::StateVector& qubit, Basis basis, Rng& rng);

/// |0>,|+> -> 0 and |1>,|-> -> 1, which is the preparation bit itself.
int interpret_alice_bit(Basis basis, int bit);

/// 1 - b for (X,R) and (Z,D); b for (X,D) and (Z,R).
int interpret_bob_bit(Pauli u, Basis basis, int b);

/// Keeps the first 2n positions where Bob's requested basis matches
/// Alice's. Sets abort = InsufficientSifted when fewer than 2n exist.
SiftResult announce_and_sift(const AliceRecord& alice, const BobRecord& bob,
                             int n);

/// Picks n of the 2n sifted positions with the public coin, compares them
/// and fills the check set and the sifted keys.
CheckOutcome error_check(SiftResult& sift, const ProtocolParams& params,
                         Rng& public_rng);

/// Complete joint record of one run.
struct Transcript {
  ProtocolParams params;
  std::string strategy;
  std::size_t total_qubits = 0;
  std::vector<channel::ChannelEvent> events;

  AliceRecord alice;
  BobRecord bob;
  CharlieLog charlie;
  PublicRecord pub;
  SiftResult sift;
  std::optional<CheckOutcome> check;
  AbortReason abort = AbortReason::None;
  adversaries::AdversaryReport adversary;

  bool aborted() const { return abort != AbortReason::None; }
};

/// Runs one full exchange with `strategy` attached to its interception points. Equal
/// (params, strategy) give equal transcripts.
Transcript run_protocol(const ProtocolParams& params,
                        const adversaries::AdversaryStrategy& strategy);

}  // namespace sqkd::protocol
