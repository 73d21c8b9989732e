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

#include "sqkd/qsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqkd::qsim {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." +
                                std::to_string(kMaxQubits) + ", got " +
                                std::to_string(num_qubits));
  }
}

void check_index(const StateVector& state, int q) {
  if (q < 0 || q >= state.num_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(q) +
                            " out of range for " +
                            std::to_string(state.num_qubits()) + " qubits");
  }
}

}  // namespace

char basis_char(Basis basis) { return basis == Basis::R ? 'R' : 'D'; }

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::P: return "P";
    case GateKind::R: return "R";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits),
      amplitudes_(num_qubits >= 1 && num_qubits <= kMaxQubits
                      ? std::size_t{1} << num_qubits
                      : 0) {
  check_qubit_count(num_qubits);
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^num_qubits");
  }
  if (std::abs(norm_squared() - 1.0) > kTolerance) {
    throw std::invalid_argument("state is not normalized");
  }
}

StateVector StateVector::basis_state(int num_qubits, std::size_t index) {
  check_qubit_count(num_qubits);
  detail::AmplitudeStore amps(std::size_t{1} << num_qubits);
  if (index >= amps.size()) throw std::out_of_range("basis index out of range");
  amps[index] = 1.0;
  return StateVector(Unchecked{}, num_qubits, std::move(amps));
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes()) total += std::norm(a);
  return total;
}

StateVector bb84_state(Basis basis, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  if (basis == Basis::R) return StateVector::basis_state(1, bit);
  const double sign = bit == 0 ? 1.0 : -1.0;
  return StateVector(1, {kInvSqrt2, sign * kInvSqrt2});
}

StateVector apply_gate(const StateVector& state, const Gate& gate) {
  check_index(state, gate.target);
  detail::AmplitudeStore amps(state.amplitudes_);
  const std::size_t tmask = std::size_t{1} << gate.target;

  switch (gate.kind) {
    case GateKind::X:
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (!(i & tmask)) std::swap(amps[i], amps[i | tmask]);
      }
      break;
    case GateKind::Z:
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & tmask) amps[i] = -amps[i];
      }
      break;
    case GateKind::H:
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & tmask) continue;
        const Amplitude a0 = amps[i];
        const Amplitude a1 = amps[i | tmask];
        amps[i] = (a0 + a1) * kInvSqrt2;
        amps[i | tmask] = (a0 - a1) * kInvSqrt2;
      }
      break;
    case GateKind::P:
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & tmask) amps[i] *= Amplitude{0.0, 1.0};
      }
      break;
    case GateKind::R: {
      const Amplitude phase = std::polar(1.0, std::numbers::pi / 4.0);
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & tmask) amps[i] *= phase;
      }
      break;
    }
    case GateKind::CNOT: {
      check_index(state, gate.control);
      if (gate.control == gate.target) {
        throw std::invalid_argument("CNOT control and target must differ");
      }
      const std::size_t cmask = std::size_t{1} << gate.control;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
      }
      break;
    }
  }
  return StateVector(StateVector::Unchecked{}, state.num_qubits_,
                     std::move(amps));
}

double probability_of_one(const StateVector& state, int target) {
  check_index(state, target);
  const std::size_t tmask = std::size_t{1} << target;
  double p1 = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & tmask) p1 += std::norm(amps[i]);
  }
  return p1;
}

Measurement measure_computational(const StateVector& state, int target,
                                  Rng& rng) {
  const double p1 = probability_of_one(state, target);
  const double p0 = 1.0 - p1;
  int outcome;
  if (p1 <= 0.0) {
    outcome = 0;
  } else if (p0 <= 0.0) {
    outcome = 1;
  } else {
    outcome = rng.uniform() < p0 ? 0 : 1;
  }

  const std::size_t tmask = std::size_t{1} << target;
  const double scale = 1.0 / std::sqrt(outcome == 0 ? p0 : p1);
  detail::AmplitudeStore amps(state.amplitudes_.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const bool bit_set = (i & tmask) != 0;
    if (bit_set == (outcome == 1)) amps[i] = state.amplitudes_[i] * scale;
  }
  return {outcome,
          StateVector(StateVector::Unchecked{}, state.num_qubits_,
                      std::move(amps))};
}

Measurement measure_in_basis(const StateVector& state, Basis basis, int target,
                             Rng& rng) {
  if (basis == Basis::R) return measure_computational(state, target, rng);
  auto m = measure_computational(apply_gate(state, Gate::h(target)), target, rng);
  return {m.outcome, apply_gate(m.collapsed, Gate::h(target))};
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("dimension mismatch in phase comparison");
  }
  // The optimal phase aligns b with a: c = <b|a> / |<b|a>|.
  Amplitude overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    overlap += std::conj(b[i]) * a[i];
  }
  const double mag = std::abs(overlap);
  const Amplitude c = mag > 0.0 ? overlap / mag : Amplitude{1.0, 0.0};
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    dist2 += std::norm(a[i] - c * b[i]);
  }
  return std::sqrt(dist2) <= tol;
}

StateVector tensor(const StateVector& high, const StateVector& low) {
  const int total = high.num_qubits() + low.num_qubits();
  check_qubit_count(total);
  detail::AmplitudeStore amps(std::size_t{1} << total);
  for (std::size_t h = 0; h < high.dimension(); ++h) {
    for (std::size_t l = 0; l < low.dimension(); ++l) {
      amps[(h << low.num_qubits()) | l] = high[h] * low[l];
    }
  }
  return StateVector(StateVector::Unchecked{}, total, std::move(amps));
}

}  // namespace sqkd::qsim
