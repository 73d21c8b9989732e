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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace sqkd;
using namespace sqkd::qsim;

namespace {

constexpr double kS = 0.70710678118654752440;

StateVector random_state(int qubits, Rng& rng) {
  std::vector<Amplitude> amps(std::size_t{1} << qubits);
  double norm = 0;
  for (auto& a : amps) {
    a = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector(qubits, amps);
}

Gate random_gate(int qubits, Rng& rng) {
  int t = static_cast<int>(rng.below(qubits));
  switch (rng.below(6)) {
    case 0: return Gate::x(t);
    case 1: return Gate::z(t);
    case 2: return Gate::h(t);
    case 3: return Gate::p(t);
    case 4: return Gate::r(t);
    default: {
      if (qubits < 2) return Gate::h(t);
      int c = static_cast<int>(rng.below(qubits - 1));
      if (c >= t) ++c;
      return Gate::cnot(c, t);
    }
  }
}

StateVector repeat(StateVector s, const Gate& g, int times) {
  for (int i = 0; i < times; ++i) s = apply_gate(s, g);
  return s;
}

}  // namespace

TEST(Qsim, bb84_amplitudes) {
  auto r0 = bb84_state(Basis::R, 0);
  EXPECT_EQ(r0[0], Amplitude(1, 0));
  EXPECT_EQ(r0[1], Amplitude(0, 0));
  auto d0 = bb84_state(Basis::D, 0);
  EXPECT_NEAR(d0[0].real(), kS, 1e-15);
  EXPECT_NEAR(d0[1].real(), kS, 1e-15);
  auto d1 = bb84_state(Basis::D, 1);
  EXPECT_NEAR(d1[0].real(), kS, 1e-15);
  EXPECT_NEAR(d1[1].real(), -kS, 1e-15);
  EXPECT_THROW(bb84_state(Basis::R, 2), std::invalid_argument);
}

TEST(Qsim, gate_examples) {
  EXPECT_TRUE(equal_up_to_global_phase(
      apply_gate(bb84_state(Basis::R, 0), Gate::x(0)), bb84_state(Basis::R, 1)));
  EXPECT_TRUE(equal_up_to_global_phase(
      apply_gate(bb84_state(Basis::D, 0), Gate::z(0)), bb84_state(Basis::D, 1)));

  auto r = apply_gate(bb84_state(Basis::R, 1), Gate::r(0));
  auto expected = std::polar(1.0, std::numbers::pi / 4);
  EXPECT_NEAR(std::abs(r[0]), 0.0, 1e-15);
  EXPECT_NEAR(r[1].real(), expected.real(), 1e-15);
  EXPECT_NEAR(r[1].imag(), expected.imag(), 1e-15);

  auto p = apply_gate(bb84_state(Basis::R, 1), Gate::p(0));
  EXPECT_NEAR(p[1].imag(), 1.0, 1e-15);

  auto h = apply_gate(bb84_state(Basis::R, 1), Gate::h(0));
  EXPECT_NEAR(h[0].real(), kS, 1e-15);
  EXPECT_NEAR(h[1].real(), -kS, 1e-15);
}

TEST(Qsim, cnot_truth_table) {
  // Qubit 1 is control, qubit 0 target; index = 2*control + target.
  const std::size_t expected[] = {0, 1, 3, 2};
  for (std::size_t in = 0; in < 4; ++in) {
    auto out = apply_gate(StateVector::basis_state(2, in), Gate::cnot(1, 0));
    EXPECT_EQ(out[expected[in]], Amplitude(1, 0)) << in;
  }
  EXPECT_THROW(apply_gate(StateVector(2), Gate::cnot(1, 1)),
               std::invalid_argument);
}

TEST(Qsim, index_errors) {
  EXPECT_THROW(apply_gate(StateVector(1), Gate::x(1)), std::out_of_range);
  EXPECT_THROW(apply_gate(StateVector(2), Gate::cnot(2, 0)), std::out_of_range);
  EXPECT_THROW(StateVector(0), std::invalid_argument);
  EXPECT_THROW(StateVector(kMaxQubits + 1), std::invalid_argument);
  EXPECT_THROW(StateVector(1, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(StateVector(2, {1.0, 0.0}), std::invalid_argument);
}

TEST(Qsim, global_phase_examples) {
  auto one = bb84_state(Basis::R, 1);
  EXPECT_TRUE(equal_up_to_global_phase(one, StateVector(1, {0.0, -1.0})));
  EXPECT_TRUE(equal_up_to_global_phase(one, StateVector(1, {0.0, {0.0, 1.0}})));
  EXPECT_FALSE(equal_up_to_global_phase(bb84_state(Basis::R, 0), one));
  EXPECT_THROW(equal_up_to_global_phase(one, StateVector(2)),
               std::invalid_argument);
}

TEST(Qsim, xz_on_minus_by_hand) {
  // |-> = (s, -s). Z negates the second amplitude: (s, s). X swaps: (s, s).
  const std::vector<Amplitude> by_hand = {kS, kS};
  auto got = apply_gate(apply_gate(bb84_state(Basis::D, 1), Gate::z(0)),
                        Gate::x(0));
  EXPECT_NEAR(std::abs(got[0] - by_hand[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(got[1] - by_hand[1]), 0.0, 1e-12);
  EXPECT_TRUE(equal_up_to_global_phase(got, bb84_state(Basis::D, 0)));
  EXPECT_FALSE(equal_up_to_global_phase(got, bb84_state(Basis::D, 1)));
}

TEST(Qsim, normalization_preserved) {
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    int qubits = 1 + static_cast<int>(rng.below(4));
    auto s = random_state(qubits, rng);
    auto g = random_gate(qubits, rng);
    ASSERT_NEAR(apply_gate(s, g).norm_squared(), 1.0, 1e-9);
  }
}

TEST(Qsim, gate_orders) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_state(3, rng);
    int t = static_cast<int>(rng.below(3));
    for (const Gate& g : {Gate::x(t), Gate::z(t), Gate::h(t)}) {
      EXPECT_TRUE(equal_up_to_global_phase(repeat(s, g, 2), s));
    }
    EXPECT_TRUE(equal_up_to_global_phase(repeat(s, Gate::cnot((t + 1) % 3, t), 2), s));
    EXPECT_TRUE(equal_up_to_global_phase(repeat(s, Gate::p(t), 4), s));
    EXPECT_TRUE(equal_up_to_global_phase(repeat(s, Gate::r(t), 8), s));
    EXPECT_TRUE(equal_up_to_global_phase(repeat(s, Gate::p(t), 2),
                                         apply_gate(s, Gate::z(t))));
  }
}

TEST(Qsim, eigenstate_measurements) {
  Rng rng(13);
  for (Basis basis : {Basis::R, Basis::D}) {
    for (int bit : {0, 1}) {
      auto s = bb84_state(basis, bit);
      for (int i = 0; i < 100; ++i) {
        auto m = measure_in_basis(s, basis, 0, rng);
        ASSERT_EQ(m.outcome, bit);
        ASSERT_TRUE(equal_up_to_global_phase(m.collapsed, s));
      }
    }
  }
  auto m0 = measure_computational(bb84_state(Basis::R, 0), 0, rng);
  EXPECT_EQ(m0.outcome, 0);
  auto m1 = measure_computational(bb84_state(Basis::R, 1), 0, rng);
  EXPECT_EQ(m1.outcome, 1);
  EXPECT_TRUE(equal_up_to_global_phase(m1.collapsed, bb84_state(Basis::R, 1)));
}

TEST(Qsim, born_frequencies) {
  Rng rng(14);
  struct Case { StateVector s; Basis b; };
  const Case cases[] = {
      {bb84_state(Basis::D, 0), Basis::R},
      {bb84_state(Basis::R, 0), Basis::D},
      {bb84_state(Basis::D, 1), Basis::R},
  };
  for (const auto& c : cases) {
    int zeros = 0;
    for (int i = 0; i < 10000; ++i) zeros += measure_in_basis(c.s, c.b, 0, rng).outcome == 0;
    EXPECT_NEAR(zeros / 1e4, 0.5, 0.02);
  }
}

TEST(Qsim, collapse_is_projection) {
  Rng rng(15);
  auto bell = apply_gate(apply_gate(StateVector(2), Gate::h(1)), Gate::cnot(1, 0));
  for (int i = 0; i < 50; ++i) {
    auto m = measure_computational(bell, 1, rng);
    auto idx = m.outcome ? 3u : 0u;
    EXPECT_NEAR(std::norm(m.collapsed[idx]), 1.0, 1e-12);
    EXPECT_NEAR(m.collapsed.norm_squared(), 1.0, 1e-12);
  }
}

TEST(Qsim, closed_under_paulis) {
  std::vector<StateVector> set;
  for (Basis b : {Basis::R, Basis::D})
    for (int bit : {0, 1}) set.push_back(bb84_state(b, bit));
  for (const auto& s : set) {
    for (const Gate& g : {Gate::x(0), Gate::z(0)}) {
      auto out = apply_gate(s, g);
      int hits = 0;
      for (const auto& t : set) hits += equal_up_to_global_phase(out, t);
      EXPECT_EQ(hits, 1);
    }
  }
}

TEST(Qsim, tensor_layout) {
  auto s = tensor(bb84_state(Basis::R, 1), bb84_state(Basis::R, 0));
  EXPECT_EQ(s.num_qubits(), 2);
  EXPECT_EQ(s[2], Amplitude(1, 0));
  EXPECT_NEAR(probability_of_one(s, 1), 1.0, 1e-15);
  EXPECT_NEAR(probability_of_one(s, 0), 0.0, 1e-15);
}
