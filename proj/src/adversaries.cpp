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

#include "sqkd/adversaries.hpp"

#include <stdexcept>
#include <utility>

#include "sqkd/protocol.hpp"

namespace sqkd::adversaries {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Basis draw_basis(BasisPolicy policy, Rng& rng) {
  switch (policy) {
    case BasisPolicy::AlwaysR: return Basis::R;
    case BasisPolicy::AlwaysD: return Basis::D;
    case BasisPolicy::Uniform: break;
  }
  return rng.bit() ? Basis::D : Basis::R;
}

class EveInterceptor final : public Interceptor {
 public:
  explicit EveInterceptor(BasisPolicy policy) : policy_(policy) {}

  StateVector on_stream(std::size_t, StateVector qubit, Rng& rng) override {
    auto r = eve_intercept_resend(qubit, policy_, rng);
    ++report_.intercepted;
    report_.eve_bases.push_back(r.basis);
    report_.eve_outcomes.push_back(static_cast<std::uint8_t>(r.outcome));
    return std::move(r.forwarded);
  }

 private:
  BasisPolicy policy_;
};

class AbstractEveInterceptor final : public Interceptor {
 public:
  void on_sifted(protocol::SiftResult& sift, Rng& rng) override {
    for (std::size_t k = 0; k < sift.agreed_positions.size(); ++k) {
      const auto outcome = eve_abstract(rng);
      if (outcome.guessed_both) ++report_.abstract_guessed_both;
      sift.bob_bits[k] =
          static_cast<std::uint8_t>(sift.alice_bits[k] ^ (outcome.agrees ? 0 : 1));
    }
  }
};

class SubstituteInterceptor final : public Interceptor {
 public:
  SubstituteInterceptor() { report_.substitute.emplace(); }

  StateVector on_stream(std::size_t, StateVector qubit, Rng& rng) override {
    auto step = charlie_substitute(qubit, rng);
    auto& rec = *report_.substitute;
    rec.alice_outcomes.push_back(static_cast<std::uint8_t>(step.alice_outcome));
    rec.forwarded_bits.push_back(static_cast<std::uint8_t>(step.forwarded_bit));
    ++report_.intercepted;
    return std::move(step.forwarded);
  }

  StateVector on_gate_request(QubitTag tag, const StateVector& qubit,
                              Pauli requested, Rng& rng) override {
    // Charlie recognizes his own qubit, applies the gate, then reads the
    // result in R: a flip relative to what he sent means X was applied.
    StateVector out = protocol::charlie_apply_gate(qubit, requested);
    const auto probe = qsim::measure_computational(out, 0, rng);
    auto& rec = *report_.substitute;
    const int sent = rec.forwarded_bits.at(tag.origin);
    rec.kept_positions.push_back(tag.origin);
    rec.inferred_pauli.push_back(probe.outcome != sent ? Pauli::X : Pauli::Z);
    return probe.collapsed;
  }

  int on_measure_request(QubitTag tag, const StateVector& qubit, Basis basis,
                         Rng& rng) override {
    auto& rec = *report_.substitute;
    rec.measured_positions.push_back(tag.origin);
    rec.inferred_basis.push_back(basis);
    return protocol::charlie_measure(qubit, basis, rng);
  }
};

class DeviationInterceptor final : public Interceptor {
 public:
  explicit DeviationInterceptor(double prob) : prob_(prob) {}

  StateVector on_gate_request(QubitTag, const StateVector& qubit,
                              Pauli requested, Rng& rng) override {
    const Pauli applied = charlie_gate_deviation(requested, prob_, rng);
    if (applied != requested) ++report_.gate_deviations;
    return protocol::charlie_apply_gate(qubit, applied);
  }

 private:
  double prob_;
};

class BayesianInterceptor final : public Interceptor {
 public:
  void on_complete(const protocol::CharlieLog& log,
                   const protocol::PublicRecord& pub,
                   const protocol::ProtocolParams& params,
                   const Bits& key_A) override {
    ViewOptions options;
    options.timing_side_channel = params.timing_side_channel;
    options.keep_probability = params.keep_probability;
    options.measure_probability = params.measure_probability;
    options.hop_time = 1.0 / params.rate + params.latency;
    report_.bayesian =
        charlie_bayesian_guess(build_adversary_view(log, pub, options), key_A);
  }
};

class DelayInterceptor final : public Interceptor {
 public:
  explicit DelayInterceptor(double delay) : delay_(delay) {}
  double relay_delay() const override { return delay_; }

 private:
  double delay_;
};

}  // namespace

std::string strategy_name(const AdversaryStrategy& strategy) {
  return std::visit(
      Overloaded{
          [](const Honest&) { return std::string("honest"); },
          [](const EveInterceptResend&) {
            return std::string("eve-intercept-resend");
          },
          [](const EveAbstract&) { return std::string("eve-abstract"); },
          [](const CharlieSubstitute&) {
            return std::string("charlie-substitute");
          },
          [](const CharlieGateDeviation&) {
            return std::string("charlie-deviation");
          },
          [](const CharlieBayesianGuess&) {
            return std::string("charlie-bayesian");
          },
          [](const DelayingRelay&) { return std::string("delaying-relay"); },
      },
      strategy);
}

void validate_strategy(const AdversaryStrategy& strategy) {
  if (const auto* d = std::get_if<CharlieGateDeviation>(&strategy)) {
    if (!(d->deviation_prob >= 0.0 && d->deviation_prob <= 1.0)) {
      throw std::invalid_argument("deviation_prob must be in [0,1]");
    }
  }
  if (const auto* r = std::get_if<DelayingRelay>(&strategy)) {
    if (!(r->per_qubit_delay >= 0.0)) {
      throw std::invalid_argument("relay delay must be >= 0");
    }
  }
}

InterceptResult eve_intercept_resend(const StateVector& qubit,
                                     BasisPolicy policy, Rng& rng) {
  const Basis basis = draw_basis(policy, rng);
  auto m = qsim::measure_in_basis(qubit, basis, 0, rng);
  return {std::move(m.collapsed), basis, m.outcome};
}

AbstractOutcome eve_abstract(Rng& rng) {
  const bool first = rng.bit();
  const bool second = rng.bit();
  AbstractOutcome out;
  out.guessed_both = first && second;
  out.agrees = out.guessed_both || rng.bit();
  return out;
}

SubstituteStep charlie_substitute(const StateVector& alice_qubit, Rng& rng) {
  const auto m = qsim::measure_computational(alice_qubit, 0, rng);
  const int fresh = rng.bit();
  return {m.outcome, fresh, qsim::bb84_state(Basis::R, fresh)};
}

Pauli charlie_gate_deviation(Pauli requested, double deviation_prob,
                             Rng& rng) {
  if (!rng.bernoulli(deviation_prob)) return requested;
  return requested == Pauli::X ? Pauli::Z : Pauli::X;
}

StateVector Interceptor::on_stream(std::size_t, StateVector qubit, Rng&) {
  return qubit;
}

StateVector Interceptor::on_gate_request(QubitTag, const StateVector& qubit,
                                         Pauli requested, Rng&) {
  return protocol::charlie_apply_gate(qubit, requested);
}

int Interceptor::on_measure_request(QubitTag, const StateVector& qubit,
                                    Basis basis, Rng& rng) {
  return protocol::charlie_measure(qubit, basis, rng);
}

void Interceptor::on_sifted(protocol::SiftResult&, Rng&) {}

void Interceptor::on_complete(const protocol::CharlieLog&,
                              const protocol::PublicRecord&,
                              const protocol::ProtocolParams&, const Bits&) {}

std::unique_ptr<Interceptor> make_interceptor(
    const AdversaryStrategy& strategy, const protocol::ProtocolParams& params) {
  std::unique_ptr<Interceptor> out = std::visit(
      Overloaded{
          [](const Honest&) -> std::unique_ptr<Interceptor> {
            return std::make_unique<Interceptor>();
          },
          [](const EveInterceptResend& s) -> std::unique_ptr<Interceptor> {
            return std::make_unique<EveInterceptor>(s.policy);
          },
          [](const EveAbstract&) -> std::unique_ptr<Interceptor> {
            return std::make_unique<AbstractEveInterceptor>();
          },
          [](const CharlieSubstitute&) -> std::unique_ptr<Interceptor> {
            return std::make_unique<SubstituteInterceptor>();
          },
          [](const CharlieGateDeviation& s) -> std::unique_ptr<Interceptor> {
            return std::make_unique<DeviationInterceptor>(s.deviation_prob);
          },
          [&](const CharlieBayesianGuess&) -> std::unique_ptr<Interceptor> {
            if (params.total_qubits() > kMaxEnumerationQubits) {
              throw EnumerationCapExceeded(
                  "Bayesian guesser supports at most 24 qubits");
            }
            return std::make_unique<BayesianInterceptor>();
          },
          [&](const DelayingRelay& s) -> std::unique_ptr<Interceptor> {
            const double d = s.per_qubit_delay > 0.0 ? s.per_qubit_delay
                                                     : 1.0 / params.threshold_l;
            return std::make_unique<DelayInterceptor>(d);
          },
      },
      strategy);
  out->report().strategy = strategy_name(strategy);
  return out;
}

}  // namespace sqkd::adversaries
