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

#include "sqkd/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqkd::protocol {

using channel::EventKind;
using channel::Party;
using qsim::StateVector;

char pauli_char(Pauli pauli) { return pauli == Pauli::X ? 'X' : 'Z'; }

qsim::Gate pauli_gate(Pauli pauli, int target) {
  return pauli == Pauli::X ? qsim::Gate::x(target) : qsim::Gate::z(target);
}

std::string_view abort_reason_name(AbortReason reason) {
  switch (reason) {
    case AbortReason::None: return "";
    case AbortReason::SpeedBelowThreshold: return "SPEED_BELOW_THRESHOLD";
    case AbortReason::InsufficientSifted: return "INSUFFICIENT_SIFTED";
    case AbortReason::ErrorsExceedThreshold: return "ERRORS_EXCEED_THRESHOLD";
  }
  return "";
}

std::size_t ProtocolParams::total_qubits() const {
  // The slack keeps products like 16*10*1.25 from rounding up past 200.
  return static_cast<std::size_t>(std::ceil(16.0 * n * (1.0 + delta) - 1e-9));
}

double ProtocolParams::nominal_delegated() const {
  return 8.0 * n * (1.0 + theta);
}

double ProtocolParams::nominal_measured() const {
  return 4.0 * n * (1.0 + sigma);
}

void ProtocolParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid protocol parameter: " + what);
  };
  if (n < 1) fail("n must be >= 1");
  if (delta < 0 || theta < 0 || sigma < 0) fail("delta, theta, sigma must be >= 0");
  if (!(rate > 0)) fail("rate must be > 0");
  if (!(threshold_l > 0)) fail("threshold_l must be > 0");
  if (latency < 0) fail("latency must be >= 0");
  if (rate_window < 2) fail("rate window must hold at least 2 arrivals");
  if (qber_abort_threshold < 0 || qber_abort_threshold > 1) {
    fail("qber_abort_threshold must be in [0,1]");
  }
  if (keep_probability < 0 || keep_probability > 1 ||
      measure_probability < 0 || measure_probability > 1) {
    fail("Bob's coin probabilities must be in [0,1]");
  }
}

std::vector<Basis> AliceRecord::bases() const {
  std::vector<Basis> out;
  out.reserve(qubits.size());
  for (const auto& q : qubits) out.push_back(q.basis);
  return out;
}

AliceRecord alice_prepare(const ProtocolParams& params, Rng& rng) {
  const std::size_t total = params.total_qubits();
  AliceRecord record;
  record.qubits.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const Basis basis = rng.bit() ? Basis::D : Basis::R;
    const int bit = rng.bit();
    if (!params.alice_encrypted_preparation) {
      record.qubits.push_back(
          {basis, static_cast<std::uint8_t>(bit), qsim::bb84_state(basis, bit), {}});
      continue;
    }
    // psi = X^a Z^b phi keeps phi's basis; X flips an R bit, Z flips a D bit.
    const qotp::PadKey pad = qotp::random_key(rng);
    StateVector psi = qotp::encrypt(qsim::bb84_state(basis, bit), pad, 0);
    const int flipped = bit ^ (basis == Basis::R ? pad.a : pad.b);
    record.qubits.push_back(
        {basis, static_cast<std::uint8_t>(flipped), std::move(psi), pad});
  }
  return record;
}

std::optional<Pauli> bob_first_pass(Rng& rng, double keep_probability) {
  if (!rng.bernoulli(keep_probability)) return std::nullopt;
  return rng.bit() ? Pauli::Z : Pauli::X;
}

StateVector charlie_apply_gate(const StateVector& qubit, Pauli gate) {
  return qsim::apply_gate(qubit, pauli_gate(gate));
}

std::optional<Basis> bob_second_pass(Rng& rng, double measure_probability) {
  if (!rng.bernoulli(measure_probability)) return std::nullopt;
  return rng.bit() ? Basis::D : Basis::R;
}

int charlie_measure(const StateVector& qubit, Basis basis, Rng& rng) {
  return qsim::measure_in_basis(qubit, basis, 0, rng).outcome;
}

int interpret_alice_bit(Basis /*basis*/, int bit) { return bit; }

int interpret_bob_bit(Pauli u, Basis basis, int b) {
  const bool flip = (u == Pauli::X && basis == Basis::R) ||
                    (u == Pauli::Z && basis == Basis::D);
  return flip ? 1 - b : b;
}

SiftResult announce_and_sift(const AliceRecord& alice, const BobRecord& bob,
                             int n) {
  SiftResult sift;
  const std::size_t wanted = 2 * static_cast<std::size_t>(n);
  for (std::size_t k = 0; k < bob.measured_positions.size(); ++k) {
    const std::size_t pos = bob.measured_positions[k];
    const auto& prep = alice.qubits.at(pos);
    if (bob.basis_request[k] != prep.basis) continue;
    ++sift.agreed_count;
    if (sift.agreed_positions.size() == wanted) continue;
    const Pauli u = bob.pauli_choice.at(bob.measured_kept_index[k]);
    sift.agreed_positions.push_back(pos);
    sift.alice_bits.push_back(
        static_cast<std::uint8_t>(interpret_alice_bit(prep.basis, prep.bit)));
    sift.bob_bits.push_back(static_cast<std::uint8_t>(
        interpret_bob_bit(u, bob.basis_request[k], bob.reported_outcome[k])));
  }
  if (sift.agreed_positions.size() < wanted) {
    sift.abort = AbortReason::InsufficientSifted;
  }
  return sift;
}

CheckOutcome error_check(SiftResult& sift, const ProtocolParams& params,
                         Rng& public_rng) {
  const std::size_t total = sift.agreed_positions.size();
  const std::size_t n = static_cast<std::size_t>(params.n);
  if (total != 2 * n || sift.alice_bits.size() != total ||
      sift.bob_bits.size() != total) {
    throw std::invalid_argument("error_check needs exactly 2n sifted bits");
  }

  // Partial Fisher-Yates: the first n slots become the check set.
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + public_rng.below(total - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint8_t> in_check(total, 0);
  for (std::size_t i = 0; i < n; ++i) in_check[order[i]] = 1;

  CheckOutcome outcome;
  sift.check_set.clear();
  sift.sifted_key_A.clear();
  sift.sifted_key_B.clear();
  for (std::size_t k = 0; k < total; ++k) {
    if (in_check[k]) {
      sift.check_set.push_back(k);
      if (sift.alice_bits[k] != sift.bob_bits[k]) ++outcome.disagreements;
    } else {
      sift.sifted_key_A.push_back(sift.alice_bits[k]);
      sift.sifted_key_B.push_back(sift.bob_bits[k]);
    }
  }
  outcome.qber = static_cast<double>(outcome.disagreements) / n;
  outcome.abort = outcome.qber > params.qber_abort_threshold;
  if (outcome.abort) sift.abort = AbortReason::ErrorsExceedThreshold;
  return outcome;
}

namespace {

std::string bits_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string positions_string(const std::vector<std::size_t>& positions) {
  std::string s;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(positions[i]);
  }
  return s;
}

// Independent streams per role so one party's draws never shift another's.
enum Stream : std::uint64_t { kAlice = 1, kBob, kCharlie, kAdversary, kPublic };

}  // namespace

Transcript run_protocol(const ProtocolParams& params,
                        const adversaries::AdversaryStrategy& strategy) {
  params.validate();
  adversaries::validate_strategy(strategy);

  Rng alice_rng(derive_seed(params.seed, kAlice));
  Rng bob_rng(derive_seed(params.seed, kBob));
  Rng charlie_rng(derive_seed(params.seed, kCharlie));
  Rng adversary_rng(derive_seed(params.seed, kAdversary));
  Rng public_rng(derive_seed(params.seed, kPublic));

  auto interceptor = adversaries::make_interceptor(strategy, params);

  Transcript t;
  t.params = params;
  t.strategy = adversaries::strategy_name(strategy);
  t.total_qubits = params.total_qubits();
  t.pub.total_qubits = t.total_qubits;

  channel::Network net(params.record_events);
  const channel::LinkConfig hop{params.rate, params.latency, 0.0};
  const auto alice_bob =
      net.add_link(Party::Alice, Party::Bob,
                   {params.rate, params.latency, interceptor->relay_delay()});
  const auto bob_charlie_q = net.add_link(Party::Bob, Party::Charlie, hop);
  const auto bob_charlie_gate = net.add_link(Party::Bob, Party::Charlie, hop);
  const auto charlie_bob_q = net.add_link(Party::Charlie, Party::Bob, hop);
  const auto bob_charlie_meas = net.add_link(Party::Bob, Party::Charlie, hop);
  const auto bob_charlie_basis = net.add_link(Party::Bob, Party::Charlie, hop);
  const auto charlie_bob_out = net.add_link(Party::Charlie, Party::Bob, hop);
  const auto alice_bob_pub = net.add_link(Party::Alice, Party::Bob, hop);
  const auto bob_alice_pub = net.add_link(Party::Bob, Party::Alice, hop);

  auto finish = [&](AbortReason reason) {
    t.abort = reason;
    t.adversary = std::move(interceptor->report());
    t.events = net.take_events();
    return std::move(t);
  };

  t.alice = alice_prepare(params, alice_rng);
  const std::size_t total = t.total_qubits;

  // Quantum transmission, first pass: Alice -> Bob, Bob keeps or discards.
  struct InFlight {
    std::size_t origin;
    StateVector state;
    double bob_time;
  };
  std::vector<InFlight> kept;
  kept.reserve(total / 2 + 1);
  channel::RateMonitor monitor({params.rate_window, params.threshold_l});
  double now = 0.0;
  if (params.record_events) t.charlie.stream_arrival_times.reserve(total);

  for (std::size_t i = 0; i < total; ++i) {
    const auto ev = net.schedule_send(
        alice_bob, EventKind::Qubit, static_cast<double>(i) / params.rate,
        [i] { return "qubit " + std::to_string(i); });
    StateVector qubit =
        interceptor->on_stream(i, t.alice.qubits[i].state, adversary_rng);
    now = ev.arrival_time;
    t.charlie.stream_arrival_times.push_back(ev.arrival_time);
    if (monitor.push(ev.arrival_time) == channel::SpeedVerdict::Abort) {
      return finish(AbortReason::SpeedBelowThreshold);
    }
    const auto u = bob_first_pass(bob_rng, params.keep_probability);
    if (!u) continue;
    t.bob.kept_positions.push_back(i);
    t.bob.pauli_choice.push_back(*u);
    kept.push_back({i, std::move(qubit), ev.arrival_time});
  }

  // Delegation: Charlie applies u and reflects; Bob measures or discards.
  const double max_round_trip =
      2.0 * (1.0 / params.threshold_l + params.latency) *
      (1.0 + channel::kRateRelativeSlack);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const Pauli u = t.bob.pauli_choice[j];
    const auto fwd = net.schedule_send(
        bob_charlie_q, EventKind::Qubit, kept[j].bob_time,
        [&] { return "qubit " + std::to_string(j); });
    net.schedule_send(bob_charlie_gate, EventKind::Classical, kept[j].bob_time,
                      [u] { return std::string("gate_request ") + pauli_char(u); });
    t.charlie.gate_requests.push_back(u);
    t.charlie.gate_receipt_times.push_back(fwd.arrival_time);

    const adversaries::QubitTag tag{kept[j].origin};
    StateVector reflected =
        interceptor->on_gate_request(tag, kept[j].state, u, charlie_rng);
    const auto back = net.schedule_send(
        charlie_bob_q, EventKind::Qubit, fwd.arrival_time,
        [&] { return "qubit " + std::to_string(j); });
    t.charlie.reflect_arrival_times.push_back(back.arrival_time);
    now = back.arrival_time;
    if (back.arrival_time - kept[j].bob_time > max_round_trip) {
      return finish(AbortReason::SpeedBelowThreshold);
    }

    const auto basis = bob_second_pass(bob_rng, params.measure_probability);
    if (!basis) continue;
    const auto meas = net.schedule_send(
        bob_charlie_meas, EventKind::Qubit, back.arrival_time,
        [&] { return "qubit " + std::to_string(j); });
    net.schedule_send(bob_charlie_basis, EventKind::Classical,
                      back.arrival_time, [b = *basis] {
                        return std::string("basis_request ") +
                               qsim::basis_char(b);
                      });
    const int outcome =
        interceptor->on_measure_request(tag, reflected, *basis, charlie_rng);
    t.charlie.measure_requests.push_back(*basis);
    t.charlie.outcomes.push_back(static_cast<std::uint8_t>(outcome));
    t.charlie.measure_receipt_times.push_back(meas.arrival_time);
    const auto out = net.schedule_send(
        charlie_bob_out, EventKind::Classical, meas.arrival_time,
        [outcome] { return "outcome " + std::to_string(outcome); });
    now = out.arrival_time;

    t.bob.measured_positions.push_back(kept[j].origin);
    t.bob.measured_kept_index.push_back(j);
    t.bob.basis_request.push_back(*basis);
    t.bob.reported_outcome.push_back(static_cast<std::uint8_t>(outcome));
  }

  // Public discussion.
  t.pub.alice_bases = t.alice.bases();
  now = net.schedule_send(alice_bob_pub, EventKind::Classical, now, [&] {
          std::string s = "bases ";
          for (auto b : t.pub.alice_bases) s.push_back(qsim::basis_char(b));
          return s;
        }).arrival_time;

  for (std::size_t k = 0; k < t.bob.measured_positions.size(); ++k) {
    const std::size_t pos = t.bob.measured_positions[k];
    if (t.bob.basis_request[k] == t.pub.alice_bases[pos]) {
      t.pub.agreed_positions.push_back(pos);
    }
  }
  now = net.schedule_send(bob_alice_pub, EventKind::Classical, now, [&] {
          return "agreed " + positions_string(t.pub.agreed_positions);
        }).arrival_time;

  t.sift = announce_and_sift(t.alice, t.bob, params.n);
  t.pub.retained_positions = t.sift.agreed_positions;
  if (t.sift.abort != AbortReason::None) return finish(t.sift.abort);

  interceptor->on_sifted(t.sift, adversary_rng);
  t.check = error_check(t.sift, params, public_rng);
  for (std::size_t k : t.sift.check_set) {
    t.pub.check_positions.push_back(t.sift.agreed_positions[k]);
    t.pub.check_bits_alice.push_back(t.sift.alice_bits[k]);
    t.pub.check_bits_bob.push_back(t.sift.bob_bits[k]);
  }
  now = net.schedule_send(alice_bob_pub, EventKind::Classical, now, [&] {
          return "check_set " + positions_string(t.pub.check_positions);
        }).arrival_time;
  now = net.schedule_send(alice_bob_pub, EventKind::Classical, now, [&] {
          return "check_bits " + bits_string(t.pub.check_bits_alice);
        }).arrival_time;
  net.schedule_send(bob_alice_pub, EventKind::Classical, now, [&] {
    return "check_bits " + bits_string(t.pub.check_bits_bob);
  });
  if (t.check->abort) return finish(AbortReason::ErrorsExceedThreshold);

  interceptor->on_complete(t.charlie, t.pub, params, t.sift.sifted_key_A);
  return finish(AbortReason::None);
}

}  // namespace sqkd::protocol
