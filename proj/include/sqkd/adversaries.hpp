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
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqkd/bayesian.hpp"
#include "sqkd/protocol_types.hpp"
#include "sqkd/qsim.hpp"
#include "sqkd/random.hpp"

namespace sqkd::adversaries {

using qsim::StateVector;

enum class BasisPolicy : std::uint8_t { Uniform, AlwaysR, AlwaysD };

struct Honest {};
/// Physical intercept-resend on the Alice->Bob link.
struct EveInterceptResend {
  BasisPolicy policy = BasisPolicy::Uniform;
};
/// Per-position guess accounting in place of physics; acts on sifted bits.
struct EveAbstract {};
/// Charlie owns the Alice->Bob link and substitutes computational states.
struct CharlieSubstitute {};
struct CharlieGateDeviation {
  double deviation_prob = 0.5;
};
/// Honest protocol; Charlie runs exact inference over his view afterwards.
struct CharlieBayesianGuess {};
/// Store-and-forward relay adding a per-qubit hold time on Alice->Bob.
/// A zero delay means one threshold period, 1/l.
struct DelayingRelay {
  double per_qubit_delay = 0.0;
};

using AdversaryStrategy =
    std::variant<Honest, EveInterceptResend, EveAbstract,
                 CharlieSubstitute, CharlieGateDeviation,
                 CharlieBayesianGuess, DelayingRelay>;

std::string strategy_name(const AdversaryStrategy& strategy);

/// Throws std::invalid_argument on out-of-range variant parameters.
void validate_strategy(const AdversaryStrategy& strategy);

struct InterceptResult {
  StateVector forwarded;
  Basis basis;
  int outcome;
};

/// Measures in a basis drawn per policy and forwards the collapsed state.
InterceptResult eve_intercept_resend(const StateVector& qubit,
                                     BasisPolicy policy, Rng& rng);

struct AbstractOutcome {
  bool guessed_both = false;
  bool agrees = false;
};

/// Both of Eve's binary guesses about Bob are right with probability 1/4,
/// and then the check bit agrees; otherwise it agrees with probability 1/2.
AbstractOutcome eve_abstract(Rng& rng);

struct SubstituteStep {
  int alice_outcome;  // Charlie's R measurement of Alice's qubit
  int forwarded_bit;
  StateVector forwarded;
};

/// Measures Alice's qubit in R and forwards a fresh uniform |0> or |1>.
SubstituteStep charlie_substitute(const StateVector& alice_qubit, Rng& rng);

/// Applies the other Pauli with probability deviation_prob.
Pauli charlie_gate_deviation(Pauli requested, double deviation_prob,
                             Rng& rng);

/// What a substituting Charlie reconstructs about Bob's choices.
struct SubstituteRecord {
  Bits alice_outcomes;
  Bits forwarded_bits;
  std::vector<std::size_t> kept_positions;
  std::vector<Pauli> inferred_pauli;
  std::vector<std::size_t> measured_positions;
  std::vector<Basis> inferred_basis;
};

struct AdversaryReport {
  std::string strategy;
  std::size_t intercepted = 0;
  std::vector<Basis> eve_bases;
  Bits eve_outcomes;
  std::size_t abstract_guessed_both = 0;
  std::size_t gate_deviations = 0;
  std::optional<SubstituteRecord> substitute;
  std::optional<BayesianReport> bayesian;
};

/// Physical identity of a qubit in flight. Honest parties never read it; an
/// adversary that produced the qubit may.
struct QubitTag {
  std::size_t origin = 0;
};

/// Hooks that run_protocol calls at each interception point. The default
/// implementations are the honest behavior.
class Interceptor {
 public:
  virtual ~Interceptor() = default;

  /// Extra per-qubit hold time on the Alice->Bob link.
  virtual double relay_delay() const { return 0.0; }

  virtual StateVector on_stream(std::size_t index, StateVector qubit,
                                Rng& rng);
  virtual StateVector on_gate_request(QubitTag tag, const StateVector& qubit,
                                      Pauli requested, Rng& rng);
  virtual int on_measure_request(QubitTag tag, const StateVector& qubit,
                                 Basis basis, Rng& rng);
  /// Runs between sifting and the error check.
  virtual void on_sifted(protocol::SiftResult& sift, Rng& rng);
  /// Runs after a run that produced keys.
  virtual void on_complete(const protocol::CharlieLog& log,
                           const protocol::PublicRecord& pub,
                           const protocol::ProtocolParams& params,
                           const Bits& key_A);

  AdversaryReport& report() { return report_; }

 protected:
  AdversaryReport report_;
};

std::unique_ptr<Interceptor> make_interceptor(
    const AdversaryStrategy& strategy, const protocol::ProtocolParams& params);

}  // namespace sqkd::adversaries
