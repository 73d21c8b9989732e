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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "sqkd/random.hpp"

namespace sqkd::postproc {
namespace {

struct BudgetExhausted {};

class Cascade {
 public:
  Cascade(const Bits& a, Bits b, std::size_t budget)
      : a_(a), b_(std::move(b)), budget_(budget) {}

  void run_pass(std::vector<std::size_t> order, std::size_t block) {
    Pass pass;
    pass.block = std::max<std::size_t>(1, std::min(block, order.size()));
    pass.where.assign(order.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) pass.where[order[k]] = k;
    pass.order = std::move(order);
    passes_.push_back(std::move(pass));

    const std::size_t p = passes_.size() - 1;
    const std::size_t blocks = block_count(p);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      const auto [lo, hi] = bounds(p, blk);
      passes_[p].a_parity.push_back(disclose(p, lo, hi));
    }
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      if (mismatched(p, blk)) pending_.insert({p, blk});
      drain();
    }
  }

  const Bits& key() const { return b_; }
  std::size_t leaked() const { return leaked_; }
  std::size_t corrections() const { return corrections_; }

 private:
  struct Pass {
    std::vector<std::size_t> order;
    std::vector<std::size_t> where;  // position -> slot in order
    std::size_t block = 1;
    std::vector<std::uint8_t> a_parity;  // disclosed, per block
  };

  std::size_t block_count(std::size_t p) const {
    const auto& pass = passes_[p];
    return (pass.order.size() + pass.block - 1) / pass.block;
  }

  std::pair<std::size_t, std::size_t> bounds(std::size_t p,
                                             std::size_t blk) const {
    const auto& pass = passes_[p];
    const std::size_t lo = blk * pass.block;
    return {lo, std::min(lo + pass.block, pass.order.size())};
  }

  std::uint8_t parity(const Bits& bits, std::size_t p, std::size_t lo,
                      std::size_t hi) const {
    std::uint8_t acc = 0;
    for (std::size_t k = lo; k < hi; ++k) acc ^= bits[passes_[p].order[k]];
    return acc;
  }

  std::uint8_t disclose(std::size_t p, std::size_t lo, std::size_t hi) {
    if (leaked_ >= budget_) throw BudgetExhausted{};
    ++leaked_;
    return parity(a_, p, lo, hi);
  }

  bool mismatched(std::size_t p, std::size_t blk) const {
    const auto [lo, hi] = bounds(p, blk);
    return passes_[p].a_parity[blk] != parity(b_, p, lo, hi);
  }

  void drain() {
    // Smaller blocks first; earlier passes have the smaller blocks.
    while (!pending_.empty()) {
      const auto [p, blk] = *pending_.begin();
      pending_.erase(pending_.begin());
      if (!mismatched(p, blk)) continue;
      auto [lo, hi] = bounds(p, blk);
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (disclose(p, lo, mid) != parity(b_, p, lo, mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      flip(passes_[p].order[lo]);
    }
  }

  void flip(std::size_t pos) {
    b_[pos] ^= 1;
    ++corrections_;
    for (std::size_t q = 0; q < passes_.size(); ++q) {
      const std::size_t blk = passes_[q].where[pos] / passes_[q].block;
      if (blk < passes_[q].a_parity.size() && mismatched(q, blk)) {
        pending_.insert({q, blk});
      }
    }
  }

  const Bits& a_;
  Bits b_;
  std::size_t budget_;
  std::size_t leaked_ = 0;
  std::size_t corrections_ = 0;
  std::vector<Pass> passes_;
  std::set<std::pair<std::size_t, std::size_t>> pending_;
};

std::size_t hamming(const Bits& a, const Bits& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

std::size_t block_size_for_qber(double qber) {
  if (!(qber > 0.0)) return 64;
  return std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(0.5 / qber)));
}

ReconciliationReport reconcile(const Bits& key_A, const Bits& key_B,
                               const ReconcileOptions& options,
                               std::uint64_t seed) {
  if (key_A.size() != key_B.size()) {
    throw std::invalid_argument("reconcile: key lengths differ (" +
                                std::to_string(key_A.size()) + " vs " +
                                std::to_string(key_B.size()) + ")");
  }
  if (options.rounds < 0 || options.initial_block_size == 0) {
    throw std::invalid_argument("reconcile: bad options");
  }
  const std::size_t n = key_A.size();
  ReconciliationReport report;
  Cascade cascade(key_A, key_B, n);
  try {
    for (int round = 0; round < options.rounds && n > 0; ++round) {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      if (round > 0) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(round)));
        for (std::size_t i = n - 1; i > 0; --i) {
          std::swap(order[i], order[rng.below(i + 1)]);
        }
      }
      cascade.run_pass(std::move(order), options.initial_block_size << round);
      report.mismatches_after_round.push_back(hamming(key_A, cascade.key()));
    }
  } catch (const BudgetExhausted&) {
    report.mismatches_after_round.push_back(hamming(key_A, cascade.key()));
  }
  report.corrected_key = cascade.key();
  report.parity_exchanges = cascade.leaked();
  report.leaked_bits = cascade.leaked();
  report.corrections = cascade.corrections();
  report.residual_mismatch = report.corrected_key != key_A;
  return report;
}

std::size_t amplified_length(std::size_t n, std::size_t leaked_bits,
                             std::size_t security_margin) {
  if (leaked_bits + security_margin >= n) {
    throw KeyExhausted("KEY_EXHAUSTED: n=" + std::to_string(n) + ", leaked=" +
                       std::to_string(leaked_bits) + ", margin=" +
                       std::to_string(security_margin) +
                       " leaves no output bits");
  }
  return n - leaked_bits - security_margin;
}

AmplifiedKey privacy_amplify(const Bits& key, std::size_t leaked_bits,
                             std::size_t security_margin, std::uint64_t seed) {
  const std::size_t n = key.size();
  const std::size_t m = amplified_length(n, leaked_bits, security_margin);

  // T[i][j] = diag[i - j + n - 1]; diag[0..n-1] is the first row reversed,
  // diag[n-1..] the first column.
  Rng rng(seed);
  Bits diag(m + n - 1);
  for (auto& d : diag) d = static_cast<std::uint8_t>(rng.bit());

  AmplifiedKey out;
  out.key.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc ^= diag[i + n - 1 - j] & key[j];
    out.key[i] = acc;
  }
  return out;
}

}  // namespace sqkd::postproc
