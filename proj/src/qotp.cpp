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

#include "sqkd/qotp.hpp"

#include <string>

namespace sqkd::qotp {

using qsim::Gate;
using qsim::GateKind;
using qsim::StateVector;

PadKey random_key(Rng& rng) {
  const auto a = static_cast<std::uint8_t>(rng.bit());
  const auto b = static_cast<std::uint8_t>(rng.bit());
  return {a, b};
}

namespace {

void check_target(const StateVector& state, int target) {
  if (target < 0 || target >= state.num_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(target) +
                            " out of range");
  }
}

}  // namespace

StateVector encrypt(const StateVector& state, PadKey key, int target) {
  check_target(state, target);
  StateVector out = key.b ? qsim::apply_gate(state, Gate::z(target)) : state;
  return key.a ? qsim::apply_gate(out, Gate::x(target)) : out;
}

StateVector decrypt(const StateVector& state, PadKey key, int target) {
  check_target(state, target);
  StateVector out = key.a ? qsim::apply_gate(state, Gate::x(target)) : state;
  return key.b ? qsim::apply_gate(out, Gate::z(target)) : out;
}

std::vector<PadKey> key_update_clifford(const Gate& gate,
                                        std::span<const PadKey> keys) {
  const std::size_t expected = gate.kind == GateKind::CNOT ? 2 : 1;
  if (keys.size() != expected) {
    throw std::invalid_argument("key_update_clifford: expected " +
                                std::to_string(expected) + " key(s)");
  }
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::Z:
      return {keys[0]};
    case GateKind::H:
      return {PadKey{keys[0].b, keys[0].a}};
    case GateKind::P:
      return {PadKey{keys[0].a,
                     static_cast<std::uint8_t>(keys[0].a ^ keys[0].b)}};
    case GateKind::CNOT: {
      const PadKey c = keys[0];
      const PadKey t = keys[1];
      return {PadKey{c.a, static_cast<std::uint8_t>(c.b ^ t.b)},
              PadKey{static_cast<std::uint8_t>(c.a ^ t.a), t.b}};
    }
    case GateKind::R:
      break;
  }
  throw NonCliffordGate(
      "R gate needs the interactive key-update subprotocol");
}

}  // namespace sqkd::qotp
