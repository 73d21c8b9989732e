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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

using namespace sqkd;
using namespace sqkd::qotp;
using qsim::Basis;
using qsim::Gate;
using qsim::StateVector;

namespace {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

Mat eye(std::size_t d) {
  Mat m(d, std::vector<C>(d));
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

Mat mul(const Mat& a, const Mat& b) {
  std::size_t d = a.size();
  Mat m(d, std::vector<C>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

// kron(hi, lo): qubit 1 is the high factor.
Mat kron(const Mat& hi, const Mat& lo) {
  std::size_t dh = hi.size(), dl = lo.size();
  Mat m(dh * dl, std::vector<C>(dh * dl));
  for (std::size_t a = 0; a < dh; ++a)
    for (std::size_t b = 0; b < dh; ++b)
      for (std::size_t c = 0; c < dl; ++c)
        for (std::size_t d = 0; d < dl; ++d) m[a * dl + c][b * dl + d] = hi[a][b] * lo[c][d];
  return m;
}

const double s = 1 / std::sqrt(2.0);
const Mat X = {{0, 1}, {1, 0}};
const Mat Z = {{1, 0}, {0, -1}};
const Mat H = {{s, s}, {s, -s}};
const Mat P = {{1, 0}, {0, C(0, 1)}};
// Control qubit 1, target qubit 0.
const Mat CNOT = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};

Mat pad(PadKey k) { return mul(k.a ? X : eye(2), k.b ? Z : eye(2)); }

bool proportional(const Mat& a, const Mat& b) {
  C phase = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(b[i][j]) > 1e-9) { phase = a[i][j] / b[i][j]; goto found; }
found:
  if (std::abs(std::abs(phase) - 1) > 1e-9) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(a[i][j] - phase * b[i][j]) > 1e-9) return false;
  return true;
}

std::vector<PadKey> all_keys() { return {{0, 0}, {0, 1}, {1, 0}, {1, 1}}; }

// Updated key found by search: G (pad k) ~ (pad k') G.
PadKey oracle_single(const Mat& g, PadKey k) {
  PadKey found{9, 9};
  int hits = 0;
  for (auto cand : all_keys()) {
    if (proportional(mul(g, pad(k)), mul(pad(cand), g))) { found = cand; ++hits; }
  }
  EXPECT_EQ(hits, 1);
  return found;
}

std::array<PadKey, 2> oracle_cnot(PadKey kc, PadKey kt) {
  std::array<PadKey, 2> found{};
  int hits = 0;
  for (auto c : all_keys())
    for (auto t : all_keys())
      if (proportional(mul(CNOT, kron(pad(kc), pad(kt))), mul(kron(pad(c), pad(t)), CNOT))) {
        found = {c, t};
        ++hits;
      }
  EXPECT_EQ(hits, 1);
  return found;
}

std::vector<StateVector> one_qubit_inputs() {
  std::vector<StateVector> out;
  for (Basis b : {Basis::R, Basis::D})
    for (int bit : {0, 1}) out.push_back(qsim::bb84_state(b, bit));
  return out;
}

}  // namespace

TEST(Qotp, encrypt_examples) {
  auto zero = qsim::bb84_state(Basis::R, 0);
  EXPECT_TRUE(qsim::equal_up_to_global_phase(encrypt(zero, {0, 0}, 0), zero));
  EXPECT_TRUE(qsim::equal_up_to_global_phase(encrypt(zero, {1, 0}, 0),
                                             qsim::bb84_state(Basis::R, 1)));
  EXPECT_TRUE(qsim::equal_up_to_global_phase(encrypt(qsim::bb84_state(Basis::D, 0), {0, 1}, 0),
                                             qsim::bb84_state(Basis::D, 1)));
  EXPECT_TRUE(qsim::equal_up_to_global_phase(decrypt(qsim::bb84_state(Basis::R, 1), {1, 0}, 0), zero));
  EXPECT_THROW(encrypt(zero, {1, 1}, 1), std::out_of_range);
  EXPECT_THROW(decrypt(zero, {1, 1}, -1), std::out_of_range);
}

TEST(Qotp, encrypt_operator_order) {
  // Z first: Z|1> = -|1>, then X gives -|0>. The other order gives +|0>.
  auto out = encrypt(qsim::bb84_state(Basis::R, 1), {1, 1}, 0);
  EXPECT_NEAR(out[0].real(), -1.0, 1e-15);
  // Z|-> = (s, s), then X leaves it alone.
  auto enc = encrypt(qsim::bb84_state(Basis::D, 1), {1, 1}, 0);
  EXPECT_NEAR(std::abs(enc[0] - C(s)), 0, 1e-12);
  EXPECT_NEAR(std::abs(enc[1] - C(s)), 0, 1e-12);
}

TEST(Qotp, round_trip) {
  Rng rng(21);
  for (auto key : all_keys()) {
    auto minus = qsim::bb84_state(Basis::D, 1);
    EXPECT_TRUE(qsim::equal_up_to_global_phase(decrypt(encrypt(minus, key, 0), key, 0), minus));
  }
  for (int i = 0; i < 100; ++i) {
    std::vector<qsim::Amplitude> amps(8);
    double norm = 0;
    for (auto& a : amps) { a = {rng.uniform() - 0.5, rng.uniform() - 0.5}; norm += std::norm(a); }
    for (auto& a : amps) a /= std::sqrt(norm);
    StateVector st(3, amps);
    auto key = random_key(rng);
    int t = static_cast<int>(rng.below(3));
    auto back = decrypt(encrypt(st, key, t), key, t);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(back[k] - st[k]), 0, 1e-12);
  }
}

TEST(Qotp, update_examples) {
  PadKey k{1, 0};
  auto h = key_update_clifford(Gate::h(0), std::span(&k, 1));
  EXPECT_EQ(h[0], (PadKey{0, 1}));
  for (auto key : all_keys()) {
    EXPECT_EQ(key_update_clifford(Gate::x(0), std::span(&key, 1))[0], key);
  }
  std::vector<PadKey> two = {{1, 0}, {0, 0}};
  auto c = key_update_clifford(Gate::cnot(1, 0), two);
  EXPECT_EQ(c[0], (PadKey{1, 0}));
  EXPECT_EQ(c[1], (PadKey{1, 0}));
}

TEST(Qotp, update_rejects) {
  PadKey k{0, 1};
  EXPECT_THROW(key_update_clifford(Gate::r(0), std::span(&k, 1)), NonCliffordGate);
  EXPECT_THROW(key_update_clifford(Gate::cnot(1, 0), std::span(&k, 1)), std::invalid_argument);
}

TEST(Qotp, update_table_matches_matrix_oracle) {
  struct G1 { Gate gate; const Mat* m; };
  const G1 singles[] = {{Gate::x(0), &X}, {Gate::z(0), &Z}, {Gate::h(0), &H}, {Gate::p(0), &P}};
  for (const auto& g : singles) {
    for (auto k : all_keys()) {
      EXPECT_EQ(key_update_clifford(g.gate, std::span(&k, 1))[0], oracle_single(*g.m, k))
          << qsim::gate_name(g.gate.kind) << " " << int(k.a) << int(k.b);
    }
  }
  for (auto kc : all_keys()) {
    for (auto kt : all_keys()) {
      std::vector<PadKey> keys = {kc, kt};
      auto got = key_update_clifford(Gate::cnot(1, 0), keys);
      auto want = oracle_cnot(kc, kt);
      EXPECT_EQ(got[0], want[0]);
      EXPECT_EQ(got[1], want[1]);
    }
  }
}

TEST(Qotp, decrypt_after_update_single_qubit) {
  for (const Gate& g : {Gate::x(0), Gate::z(0), Gate::h(0), Gate::p(0)}) {
    for (auto k : all_keys()) {
      auto k2 = key_update_clifford(g, std::span(&k, 1))[0];
      for (const auto& in : one_qubit_inputs()) {
        auto lhs = decrypt(qsim::apply_gate(encrypt(in, k, 0), g), k2, 0);
        EXPECT_TRUE(qsim::equal_up_to_global_phase(lhs, qsim::apply_gate(in, g), 1e-9));
      }
    }
  }
}

TEST(Qotp, decrypt_after_update_two_qubits) {
  std::vector<StateVector> inputs;
  for (std::size_t i = 0; i < 4; ++i) inputs.push_back(StateVector::basis_state(2, i));
  for (const auto& hi : one_qubit_inputs())
    for (const auto& lo : one_qubit_inputs()) inputs.push_back(qsim::tensor(hi, lo));
  const Gate gates[] = {Gate::cnot(1, 0), Gate::cnot(0, 1), Gate::h(1), Gate::p(0), Gate::x(1)};
  for (const auto& g : gates) {
    for (auto k0 : all_keys()) {
      for (auto k1 : all_keys()) {
        std::vector<PadKey> keys;
        if (g.kind == qsim::GateKind::CNOT) {
          keys = {g.control == 1 ? k1 : k0, g.control == 1 ? k0 : k1};
        } else {
          keys = {g.target == 1 ? k1 : k0};
        }
        auto upd = key_update_clifford(g, keys);
        PadKey n0 = k0, n1 = k1;
        if (g.kind == qsim::GateKind::CNOT) {
          (g.control == 1 ? n1 : n0) = upd[0];
          (g.control == 1 ? n0 : n1) = upd[1];
        } else {
          (g.target == 1 ? n1 : n0) = upd[0];
        }
        for (const auto& in : inputs) {
          auto enc = encrypt(encrypt(in, k0, 0), k1, 1);
          auto dec = decrypt(decrypt(qsim::apply_gate(enc, g), n0, 0), n1, 1);
          ASSERT_TRUE(qsim::equal_up_to_global_phase(dec, qsim::apply_gate(in, g), 1e-9));
        }
      }
    }
  }
}

TEST(Qotp, uniform_pad_hides_input) {
  Rng rng(22);
  for (const auto& in : one_qubit_inputs()) {
    for (Basis b : {Basis::R, Basis::D}) {
      int ones = 0;
      for (int i = 0; i < 10000; ++i) {
        auto enc = encrypt(in, random_key(rng), 0);
        ones += qsim::measure_in_basis(enc, b, 0, rng).outcome;
      }
      EXPECT_NEAR(ones / 1e4, 0.5, 0.02);
    }
  }
}
