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
#include <optional>
#include <string_view>
#include <vector>

#include "sqkd/qotp.hpp"
#include "sqkd/qsim.hpp"

namespace sqkd::protocol {

using qsim::Basis;

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// The two gates Bob may delegate in the first pass.
enum class Pauli : std::uint8_t { X, Z };

char pauli_char(Pauli pauli);
qsim::Gate pauli_gate(Pauli pauli, int target = 0);

enum class AbortReason : std::uint8_t {
  None,
  SpeedBelowThreshold,
  InsufficientSifted,
  ErrorsExceedThreshold,
};

/// SPEED_BELOW_THRESHOLD, INSUFFICIENT_SIFTED, ERRORS_EXCEED_THRESHOLD, or
/// an empty view for None.
std::string_view abort_reason_name(AbortReason reason);

struct ProtocolParams {
  int n = 8;  // sifted-key bits
  double delta = 0.0;
  double theta = 0.0;
  double sigma = 0.0;

  double rate = 1.02e6;         // Alice's and Charlie's send rate, qubits/s
  double threshold_l = 1.02e6;  // Bob's minimum acceptable rate
  double latency = 0.0;         // per-hop propagation delay, seconds
  std::size_t rate_window = 16; // arrivals per speed measurement

  double qber_abort_threshold = 0.0;
  std::uint64_t seed = 0;

  // Bob's coins. Both are fair in the protocol; other values exist for
  // degenerate controls.
  double keep_probability = 0.5;
  double measure_probability = 0.5;

  // Alice builds each qubit as X^a Z^b applied to a random BB84 state.
  bool alice_encrypted_preparation = false;
  // Grants adversaries the timing data that reveals Bob's keep/discard
  // choices. Off by default: the speed threshold is assumed to deny it.
  bool timing_side_channel = false;

  bool record_events = true;

  /// N = ceil(16 n (1 + delta)).
  std::size_t total_qubits() const;
  /// 8n(1+theta): expected first-pass delegations, not an enforced count.
  double nominal_delegated() const;
  /// 4n(1+sigma): expected measurement requests.
  double nominal_measured() const;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
};

struct AlicePreparation {
  Basis basis;
  std::uint8_t bit;
  qsim::StateVector state;
  std::optional<qotp::PadKey> pad;  // set under encrypted preparation
};

struct AliceRecord {
  std::vector<AlicePreparation> qubits;

  std::vector<Basis> bases() const;
};

/// Bob's private bookkeeping. Positions are 0-based indices into Alice's
/// stream.
struct BobRecord {
  std::vector<std::size_t> kept_positions;        // s_j
  std::vector<Pauli> pauli_choice;                // per s_j
  std::vector<std::size_t> measured_positions;    // t_k, subsequence of s_j
  std::vector<std::size_t> measured_kept_index;   // j with s_j == t_k
  std::vector<Basis> basis_request;               // per t_k
  Bits reported_outcome;                          // per t_k
};

/// What the delegated server sees while serving Bob, in receipt order.
/// Timing fields are only consumed when the timing side channel is granted.
struct CharlieLog {
  std::vector<Pauli> gate_requests;
  std::vector<double> gate_receipt_times;
  std::vector<Basis> measure_requests;
  Bits outcomes;
  std::vector<double> measure_receipt_times;
  std::vector<double> reflect_arrival_times;
  std::vector<double> stream_arrival_times;  // Alice->Bob, tapped
};

/// Everything announced on the public channel.
struct PublicRecord {
  std::size_t total_qubits = 0;
  std::vector<Basis> alice_bases;
  std::vector<std::size_t> agreed_positions;   // all announced by Bob
  std::vector<std::size_t> retained_positions; // first 2n agreed
  std::vector<std::size_t> check_positions;
  Bits check_bits_alice;
  Bits check_bits_bob;
};

struct SiftResult {
  std::size_t agreed_count = 0;               // before truncation to 2n
  std::vector<std::size_t> agreed_positions;  // p_1..p_2n, ascending
  Bits alice_bits;                            // per agreed position
  Bits bob_bits;
  std::vector<std::size_t> check_set;  // indices into agreed_positions
  Bits sifted_key_A;
  Bits sifted_key_B;
  AbortReason abort = AbortReason::None;
};

struct CheckOutcome {
  double qber = 0.0;
  std::size_t disagreements = 0;
  bool abort = false;
};

}  // namespace sqkd::protocol
