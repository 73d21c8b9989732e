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

#include "sqkd/bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqkd/protocol.hpp"

namespace sqkd::adversaries {
namespace {

// Index of the entry in `times` closest to `target`; `times` is ascending.
std::size_t nearest(const std::vector<double>& times, double target) {
  auto it = std::lower_bound(times.begin(), times.end(), target);
  if (it == times.end()) return times.size() - 1;
  if (it == times.begin()) return 0;
  const auto prev = it - 1;
  return static_cast<std::size_t>(
      (target - *prev <= *it - target ? prev : it) - times.begin());
}

}  // namespace

AdversaryView build_adversary_view(const protocol::CharlieLog& log,
                                   const protocol::PublicRecord& pub,
                                   const ViewOptions& options) {
  AdversaryView view;
  view.total_qubits = pub.total_qubits;
  view.alice_bases = pub.alice_bases;
  view.gate_requests = log.gate_requests;
  view.measure_requests = log.measure_requests;
  view.outcomes = log.outcomes;
  view.agreed_positions = pub.agreed_positions;
  view.check_positions = pub.check_positions;
  view.check_bits_bob = pub.check_bits_bob;
  view.keep_probability = options.keep_probability;
  view.measure_probability = options.measure_probability;

  for (std::size_t pos : pub.retained_positions) {
    if (std::find(pub.check_positions.begin(), pub.check_positions.end(),
                  pos) == pub.check_positions.end()) {
      view.key_positions.push_back(pos);
    }
  }

  if (options.timing_side_channel && !log.stream_arrival_times.empty()) {
    // Each receipt left Bob the moment its predecessor hop arrived, so the
    // receipt time minus one hop lands on a unique earlier arrival.
    std::vector<std::size_t> first;
    for (double t : log.gate_receipt_times) {
      first.push_back(nearest(log.stream_arrival_times, t - options.hop_time));
    }
    std::vector<std::size_t> second;
    for (double t : log.measure_receipt_times) {
      second.push_back(nearest(log.reflect_arrival_times, t - options.hop_time));
    }
    view.first_pass_positions = std::move(first);
    view.second_pass_receipts = std::move(second);
  }
  return view;
}

std::vector<KeyBitPosterior> key_posteriors(const AdversaryView& view) {
  const std::size_t total = view.total_qubits;
  if (total > kMaxEnumerationQubits) {
    throw EnumerationCapExceeded("stream of " + std::to_string(total) +
                                 " qubits exceeds the enumeration cap of " +
                                 std::to_string(kMaxEnumerationQubits));
  }
  const std::size_t k1 = view.gate_requests.size();
  const std::size_t k2 = view.measure_requests.size();

  std::vector<std::uint8_t> agreed(total, 0);
  for (auto p : view.agreed_positions) agreed.at(p) = 1;
  std::vector<int> check_slot(total, -1);
  for (std::size_t c = 0; c < view.check_positions.size(); ++c) {
    check_slot.at(view.check_positions[c]) = static_cast<int>(c);
  }

  const double p1 = view.keep_probability;
  const double p2 = view.measure_probability;
  const double w_skip = 1.0 - p1;
  const double w_keep = p1 * (1.0 - p2);
  const double w_measure = p1 * p2;

  const auto* first = view.first_pass_positions ? &*view.first_pass_positions
                                                : nullptr;
  const auto* second = view.second_pass_receipts ? &*view.second_pass_receipts
                                                 : nullptr;

  // Bit Bob derives from receipt pair (j, k).
  auto derived_bit = [&](std::size_t j, std::size_t k) {
    return protocol::interpret_bob_bit(view.gate_requests[j],
                                       view.measure_requests[k],
                                       view.outcomes[k]);
  };
  auto can_skip = [&](std::size_t i, std::size_t j) {
    if (agreed[i]) return false;
    return !first || j == k1 || (*first)[j] != i;
  };
  auto can_keep = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (j >= k1 || agreed[i]) return false;
    if (first && (*first)[j] != i) return false;
    return !second || k == k2 || (*second)[k] != j;
  };
  auto can_measure = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (j >= k1 || k >= k2) return false;
    if (first && (*first)[j] != i) return false;
    if (second && (*second)[k] != j) return false;
    const bool match = view.measure_requests[k] == view.alice_bases[i];
    if (match != static_cast<bool>(agreed[i])) return false;
    if (check_slot[i] >= 0 &&
        derived_bit(j, k) != view.check_bits_bob[check_slot[i]]) {
      return false;
    }
    return true;
  };

  const std::size_t sj = k2 + 1;
  const std::size_t si = (k1 + 1) * sj;
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) {
    return i * si + j * sj + k;
  };

  std::vector<double> fwd((total + 1) * si, 0.0);
  fwd[at(0, 0, 0)] = 1.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j <= k1; ++j) {
      for (std::size_t k = 0; k <= k2; ++k) {
        const double f = fwd[at(i, j, k)];
        if (f == 0.0) continue;
        if (can_skip(i, j)) fwd[at(i + 1, j, k)] += f * w_skip;
        if (can_keep(i, j, k)) fwd[at(i + 1, j + 1, k)] += f * w_keep;
        if (can_measure(i, j, k)) fwd[at(i + 1, j + 1, k + 1)] += f * w_measure;
      }
    }
  }

  std::vector<double> bwd((total + 1) * si, 0.0);
  bwd[at(total, k1, k2)] = 1.0;
  for (std::size_t i = total; i-- > 0;) {
    for (std::size_t j = 0; j <= k1; ++j) {
      for (std::size_t k = 0; k <= k2; ++k) {
        double b = 0.0;
        if (can_skip(i, j)) b += w_skip * bwd[at(i + 1, j, k)];
        if (can_keep(i, j, k)) b += w_keep * bwd[at(i + 1, j + 1, k)];
        if (can_measure(i, j, k)) {
          b += w_measure * bwd[at(i + 1, j + 1, k + 1)];
        }
        bwd[at(i, j, k)] = b;
      }
    }
  }

  const double evidence = fwd[at(total, k1, k2)];
  std::vector<KeyBitPosterior> out;
  for (std::size_t pos : view.key_positions) {
    KeyBitPosterior post;
    post.position = pos;
    if (evidence > 0.0) {
      double one = 0.0;
      for (std::size_t j = 0; j < k1; ++j) {
        for (std::size_t k = 0; k < k2; ++k) {
          if (!can_measure(pos, j, k)) continue;
          const double w =
              fwd[at(pos, j, k)] * w_measure * bwd[at(pos + 1, j + 1, k + 1)];
          if (derived_bit(j, k) == 1) one += w;
        }
      }
      post.p_one = one / evidence;
    }
    post.guess = post.p_one > 0.5 + 1e-12 ? 1 : 0;
    out.push_back(post);
  }
  return out;
}

BayesianReport charlie_bayesian_guess(const AdversaryView& view,
                                      const Bits& true_key) {
  BayesianReport report;
  report.posteriors = key_posteriors(view);
  for (std::size_t i = 0; i < report.posteriors.size(); ++i) {
    const auto guess = report.posteriors[i].guess;
    report.guesses.push_back(guess);
    if (i < true_key.size()) {
      ++report.total;
      if (guess == true_key[i]) ++report.correct;
    }
  }
  return report;
}

Bits coin_flip_guess(std::size_t count, Rng& rng) {
  Bits out(count);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.bit());
  return out;
}

}  // namespace sqkd::adversaries
