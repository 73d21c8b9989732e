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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sqkd/random.hpp"

namespace sqkd::qsim {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 12;
inline constexpr double kTolerance = 1e-9;

/// Rectilinear {|0>,|1>} or diagonal {|+>,|->}.
enum class Basis : std::uint8_t { R, D };

enum class GateKind : std::uint8_t { X, Z, H, P, R, CNOT };

char basis_char(Basis basis);
std::string_view gate_name(GateKind kind);

struct Gate {
  GateKind kind;
  int target;
  int control = -1;  // CNOT only

  static Gate x(int q) { return {GateKind::X, q}; }
  static Gate z(int q) { return {GateKind::Z, q}; }
  static Gate h(int q) { return {GateKind::H, q}; }
  static Gate p(int q) { return {GateKind::P, q}; }
  static Gate r(int q) { return {GateKind::R, q}; }
  static Gate cnot(int control, int target) {
    return {GateKind::CNOT, target, control};
  }

  bool is_clifford() const { return kind != GateKind::R; }
};

struct Measurement;

namespace detail {

/// Amplitude storage that stays inline for up to two qubits.
class AmplitudeStore {
 public:
  explicit AmplitudeStore(std::size_t size) : size_(size) {
    if (size > kInline) heap_.assign(size, Amplitude{});
  }
  explicit AmplitudeStore(std::vector<Amplitude> values) : size_(values.size()) {
    if (size_ > kInline) {
      heap_ = std::move(values);
    } else {
      for (std::size_t i = 0; i < size_; ++i) inline_[i] = values[i];
    }
  }

  std::size_t size() const { return size_; }
  Amplitude* data() { return size_ > kInline ? heap_.data() : inline_.data(); }
  const Amplitude* data() const {
    return size_ > kInline ? heap_.data() : inline_.data();
  }
  Amplitude& operator[](std::size_t i) { return data()[i]; }
  const Amplitude& operator[](std::size_t i) const { return data()[i]; }

 private:
  static constexpr std::size_t kInline = 4;
  std::size_t size_;
  std::array<Amplitude, kInline> inline_{};
  std::vector<Amplitude> heap_;
};

}  // namespace detail

/// Exact state of up to kMaxQubits qubits. Qubit q is bit q of the
/// amplitude index. Values are immutable; every operation returns a new
/// state.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(int num_qubits);

  /// Throws std::invalid_argument unless the length is 2^num_qubits and
  /// the squared norm is 1 within kTolerance.
  StateVector(int num_qubits, std::vector<Amplitude> amplitudes);

  static StateVector basis_state(int num_qubits, std::size_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const {
    return {amplitudes_.data(), amplitudes_.size()};
  }
  Amplitude operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm_squared() const;

 private:
  struct Unchecked {};
  StateVector(Unchecked, int num_qubits, detail::AmplitudeStore amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_;
  detail::AmplitudeStore amplitudes_;

  friend StateVector apply_gate(const StateVector&, const Gate&);
  friend Measurement measure_computational(const StateVector&, int, Rng&);
  friend StateVector tensor(const StateVector&, const StateVector&);
};

struct Measurement {
  int outcome;
  StateVector collapsed;
};

/// (R,0)->|0>, (R,1)->|1>, (D,0)->|+>, (D,1)->|->.
StateVector bb84_state(Basis basis, int bit);

/// Throws std::out_of_range for invalid qubit indices and
/// std::invalid_argument for a CNOT whose control equals its target.
StateVector apply_gate(const StateVector& state, const Gate& gate);

/// Born-rule sampling; a zero-probability outcome is never returned.
Measurement measure_computational(const StateVector& state, int target,
                                  Rng& rng);

/// D outcomes: 0 <-> |+>, 1 <-> |->.
Measurement measure_in_basis(const StateVector& state, Basis basis, int target,
                             Rng& rng);

/// Probability that measuring `target` in the computational basis gives 1.
double probability_of_one(const StateVector& state, int target);

/// True iff some unit complex c has ||a - c*b|| <= tol.
/// Throws std::invalid_argument on a dimension mismatch.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol = kTolerance);

/// `high` occupies the upper qubit indices of the result.
StateVector tensor(const StateVector& high, const StateVector& low);

}  // namespace sqkd::qsim
