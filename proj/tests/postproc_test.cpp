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

#include "sqkd/postproc.hpp"

#include <gtest/gtest.h>

#include <string>

#include "sqkd/random.hpp"

using namespace sqkd;
using namespace sqkd::postproc;

namespace {

Bits random_bits(std::size_t n, Rng& rng) {
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.bit());
  return b;
}

std::size_t distance(const Bits& a, const Bits& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

TEST(Postproc, identical_keys_leak_top_level_only) {
  Rng rng(71);
  auto a = random_bits(16, rng);
  auto r = reconcile(a, a, {2, 4}, 1);
  EXPECT_EQ(r.corrections, 0u);
  EXPECT_EQ(r.leaked_bits, 4u + 2u);
  EXPECT_EQ(r.parity_exchanges, r.leaked_bits);
  EXPECT_FALSE(r.residual_mismatch);

  auto b = random_bits(100, rng);
  auto r4 = reconcile(b, b, {4, 7}, 2);
  EXPECT_EQ(r4.leaked_bits, 15u + 8u + 4u + 2u);  // ceil(100/7), /14, /28, /56
}

TEST(Postproc, single_flip_traced) {
  Bits a(16, 0);
  a[3] = a[9] = 1;
  Bits b = a;
  b[5] ^= 1;
  // Round 0 blocks of 4: block [4,8) mismatches. Bisection asks [4,6) (odd)
  // then [4,5) (even), landing on 5. Round 1 adds 2 parities.
  auto r = reconcile(a, b, {2, 4}, 3);
  EXPECT_FALSE(r.residual_mismatch);
  EXPECT_EQ(r.corrected_key, a);
  EXPECT_EQ(r.corrections, 1u);
  EXPECT_EQ(r.leaked_bits, 4u + 2u + 2u);
  EXPECT_EQ(r.mismatches_after_round, (std::vector<std::size_t>{0, 0}));
}

TEST(Postproc, calibrated_block_size) {
  EXPECT_EQ(block_size_for_qber(0.1), 5u);
  EXPECT_EQ(block_size_for_qber(0.0), 64u);
  EXPECT_EQ(block_size_for_qber(0.5), 2u);
}

TEST(Postproc, ten_percent_errors_reconcile) {
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    Rng rng(derive_seed(72, t));
    auto a = random_bits(256, rng);
    Bits b = a;
    for (auto& x : b)
      if (rng.bernoulli(0.1)) x ^= 1;
    auto r = reconcile(a, b, {4, block_size_for_qber(0.1)}, derive_seed(73, t));
    ok += !r.residual_mismatch;
    EXPECT_LE(r.leaked_bits, 256u);
  }
  EXPECT_GE(ok, 990);
}

TEST(Postproc, distance_never_grows) {
  Rng rng(74);
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 8 + rng.below(200);
    auto a = random_bits(n, rng);
    Bits b = a;
    double q = 0.3 * rng.uniform();
    for (auto& x : b)
      if (rng.bernoulli(q)) x ^= 1;
    std::size_t before = distance(a, b);
    auto r = reconcile(a, b, {4, 2 + rng.below(10)}, rng.next());
    std::size_t prev = before;
    for (auto d : r.mismatches_after_round) {
      EXPECT_LE(d, prev);
      prev = d;
    }
    EXPECT_EQ(distance(a, r.corrected_key), prev);
    EXPECT_EQ(r.corrections, before - prev);
    EXPECT_LE(r.leaked_bits, n);
    EXPECT_EQ(r.residual_mismatch, r.corrected_key != a);
  }
}

TEST(Postproc, reconcile_errors) {
  EXPECT_THROW(reconcile(Bits(3), Bits(4), {}, 0), std::invalid_argument);
  EXPECT_THROW(reconcile(Bits(3), Bits(3), {1, 0}, 0), std::invalid_argument);
  auto empty = reconcile(Bits{}, Bits{}, {}, 0);
  EXPECT_EQ(empty.leaked_bits, 0u);
}

TEST(Postproc, length_law) {
  EXPECT_EQ(amplified_length(8, 2, 2), 4u);
  Rng rng(75);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 10 + rng.below(100);
    std::size_t leaked = rng.below(n - 9);
    std::size_t margin = rng.below(n - leaked - 1);
    auto out = privacy_amplify(random_bits(n, rng), leaked, margin, rng.next());
    EXPECT_EQ(out.key.size(), n - leaked - margin);
  }
}

TEST(Postproc, key_exhausted) {
  EXPECT_THROW(amplified_length(8, 4, 4), KeyExhausted);
  try {
    privacy_amplify(Bits(16, 1), 10, kDefaultSecurityMargin, 0);
    FAIL();
  } catch (const KeyExhausted& e) {
    EXPECT_EQ(std::string(e.what()).rfind("KEY_EXHAUSTED", 0), 0u);
  }
}

TEST(Postproc, zero_key_and_determinism) {
  auto zero = privacy_amplify(Bits(64, 0), 10, 8, 123);
  EXPECT_EQ(zero.key, Bits(46, 0));
  Rng rng(76);
  auto k = random_bits(64, rng);
  EXPECT_EQ(privacy_amplify(k, 10, 8, 5).key, privacy_amplify(k, 10, 8, 5).key);
  EXPECT_NE(privacy_amplify(k, 10, 8, 5).key, privacy_amplify(k, 10, 8, 6).key);
}

TEST(Postproc, toeplitz_structure) {
  const std::size_t n = 20, m = 7;
  auto col = [&](std::size_t j) {
    Bits e(n, 0);
    e[j] = 1;
    return privacy_amplify(e, n - m - 2, 2, 77).key;
  };
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto c = col(j), d = col(j + 1);
    for (std::size_t i = 0; i + 1 < m; ++i) EXPECT_EQ(d[i + 1], c[i]);
  }
  Rng rng(78);
  auto x = random_bits(n, rng), y = random_bits(n, rng);
  Bits xy(n);
  for (std::size_t i = 0; i < n; ++i) xy[i] = x[i] ^ y[i];
  auto hx = privacy_amplify(x, n - m - 2, 2, 77).key;
  auto hy = privacy_amplify(y, n - m - 2, 2, 77).key;
  auto hxy = privacy_amplify(xy, n - m - 2, 2, 77).key;
  for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(hxy[i], hx[i] ^ hy[i]);
}

TEST(Postproc, single_bit_avalanche) {
  Rng rng(79);
  const std::size_t n = 64;
  std::vector<int> changed(n - 16, 0);
  for (int t = 0; t < 1000; ++t) {
    auto k = random_bits(n, rng);
    auto seed = rng.next();
    auto flipped = k;
    flipped[rng.below(n)] ^= 1;
    auto a = privacy_amplify(k, 8, 8, seed).key;
    auto b = privacy_amplify(flipped, 8, 8, seed).key;
    for (std::size_t i = 0; i < a.size(); ++i) changed[i] += a[i] != b[i];
  }
  for (int c : changed) EXPECT_NEAR(c / 1000.0, 0.5, 0.05);
}

TEST(Postproc, both_sides_agree_after_reconcile) {
  Rng rng(80);
  auto a = random_bits(256, rng);
  Bits b = a;
  for (auto& x : b)
    if (rng.bernoulli(0.05)) x ^= 1;
  auto r = reconcile(a, b, {4, block_size_for_qber(0.05)}, 9);
  ASSERT_FALSE(r.residual_mismatch);
  EXPECT_EQ(privacy_amplify(a, r.leaked_bits, kDefaultSecurityMargin, 10).key,
            privacy_amplify(r.corrected_key, r.leaked_bits, kDefaultSecurityMargin, 10).key);
}
