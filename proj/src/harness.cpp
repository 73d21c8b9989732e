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

#include "sqkd/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sqkd/random.hpp"
#include "sqkd/transcript_io.hpp"

namespace sqkd::harness {

using adversaries::AdversaryStrategy;

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  params.validate();
  adversaries::validate_strategy(strategy);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(index));
}

double confidence_radius95(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : static_cast<double>(num) / static_cast<double>(den);
}

void tally(const protocol::Transcript& t, ExperimentReport& r) {
  ++r.trials;
  r.kept_total += t.bob.kept_positions.size();
  r.measured_total += t.bob.measured_positions.size();
  r.agreed_total += t.sift.agreed_count;
  r.agreed_sq_total += t.sift.agreed_count * t.sift.agreed_count;
  if (t.aborted()) {
    ++r.aborts;
    ++r.aborts_by_reason[static_cast<std::size_t>(t.abort)];
  }
  if (t.check) {
    ++r.checked;
    if (!t.check->abort) ++r.undetected;
    r.check_bits += t.sift.check_set.size();
    r.check_disagreements += t.check->disagreements;
  }
  if (t.sift.abort != protocol::AbortReason::InsufficientSifted &&
      !t.sift.agreed_positions.empty()) {
    r.sifted_positions += t.sift.alice_bits.size();
    for (std::size_t k = 0; k < t.sift.alice_bits.size(); ++k) {
      r.sifted_agreements += t.sift.alice_bits[k] == t.sift.bob_bits[k];
    }
  }
  if (t.adversary.bayesian) {
    r.guessed_bits += t.adversary.bayesian->total;
    r.guessed_correct += t.adversary.bayesian->correct;
  }
}

}  // namespace

double ExperimentReport::undetected_frequency() const {
  return ratio(undetected, checked);
}

double ExperimentReport::undetected_ci95() const {
  return checked == 0 ? 0.0
                      : confidence_radius95(undetected_frequency(), checked);
}

double ExperimentReport::mean_qber() const {
  return ratio(check_disagreements, check_bits);
}

double ExperimentReport::abort_rate() const { return ratio(aborts, trials); }

double ExperimentReport::position_agreement() const {
  return ratio(sifted_agreements, sifted_positions);
}

double ExperimentReport::efficiency() const {
  return ratio(2 * static_cast<std::size_t>(n), total_qubits);
}

double ExperimentReport::mean_agreed() const {
  return ratio(agreed_total, trials);
}

double ExperimentReport::agreed_std_error() const {
  if (trials < 2) return 0.0;
  const double mean = mean_agreed();
  const double var = (static_cast<double>(agreed_sq_total) -
                      static_cast<double>(trials) * mean * mean) /
                     static_cast<double>(trials - 1);
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
}

double ExperimentReport::guess_accuracy() const {
  return ratio(guessed_correct, guessed_bits);
}

void ExperimentReport::merge(const ExperimentReport& o) {
  trials += o.trials;
  checked += o.checked;
  undetected += o.undetected;
  aborts += o.aborts;
  for (std::size_t i = 0; i < aborts_by_reason.size(); ++i) {
    aborts_by_reason[i] += o.aborts_by_reason[i];
  }
  check_bits += o.check_bits;
  check_disagreements += o.check_disagreements;
  sifted_positions += o.sifted_positions;
  sifted_agreements += o.sifted_agreements;
  kept_total += o.kept_total;
  measured_total += o.measured_total;
  agreed_total += o.agreed_total;
  agreed_sq_total += o.agreed_sq_total;
  guessed_bits += o.guessed_bits;
  guessed_correct += o.guessed_correct;
}

ExperimentReport run_trials(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport total;
  total.strategy = adversaries::strategy_name(config.strategy);
  total.n = config.params.n;
  total.total_qubits = config.params.total_qubits();

  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, config.trials));

  auto work = [&config](std::size_t begin, std::size_t end,
                        ExperimentReport& out) {
    protocol::ProtocolParams params = config.params;
    params.record_events = false;
    for (std::size_t i = begin; i < end; ++i) {
      params.seed = trial_seed(config.master_seed, i);
      tally(protocol::run_protocol(params, config.strategy), out);
    }
  };

  std::vector<ExperimentReport> partial(threads);
  if (threads == 1) {
    work(0, config.trials, partial[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (config.trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(config.trials, w * chunk);
      const std::size_t end = std::min(config.trials, begin + chunk);
      pool.emplace_back(work, begin, end, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& p : partial) total.merge(p);
  return total;
}

nlohmann::ordered_json report_json(const ExperimentReport& r) {
  auto num = [](double v) {
    return std::isnan(v) ? nlohmann::ordered_json(nullptr)
                         : nlohmann::ordered_json(v);
  };
  nlohmann::ordered_json j;
  j["strategy"] = r.strategy;
  j["n"] = r.n;
  j["N"] = r.total_qubits;
  j["trials"] = r.trials;
  j["checked"] = r.checked;
  j["undetected_frequency"] = num(r.undetected_frequency());
  j["undetected_ci95"] = num(r.undetected_ci95());
  j["mean_qber"] = num(r.mean_qber());
  j["abort_rate"] = num(r.abort_rate());
  nlohmann::ordered_json reasons;
  for (auto reason : {protocol::AbortReason::SpeedBelowThreshold,
                      protocol::AbortReason::InsufficientSifted,
                      protocol::AbortReason::ErrorsExceedThreshold}) {
    reasons[std::string(protocol::abort_reason_name(reason))] =
        r.aborts_by_reason[static_cast<std::size_t>(reason)];
  }
  j["aborts_by_reason"] = reasons;
  j["position_agreement"] = num(r.position_agreement());
  j["efficiency"] = num(r.efficiency());
  j["mean_agreed"] = num(r.mean_agreed());
  if (r.guessed_bits > 0) j["guess_accuracy"] = num(r.guess_accuracy());
  return j;
}

double predicted_undetected(const AdversaryStrategy& strategy, int n) {
  if (n <= 0) return 1.0;
  const double k = static_cast<double>(n);
  if (std::holds_alternative<adversaries::EveInterceptResend>(strategy)) {
    return std::pow(0.75, k);
  }
  if (std::holds_alternative<adversaries::EveAbstract>(strategy)) {
    return std::pow(0.625, k);
  }
  if (std::holds_alternative<adversaries::CharlieSubstitute>(strategy)) {
    return std::pow(0.5, k);
  }
  if (const auto* d = std::get_if<adversaries::CharlieGateDeviation>(&strategy)) {
    return std::pow(1.0 - d->deviation_prob, k);
  }
  if (std::holds_alternative<adversaries::DelayingRelay>(strategy)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return 1.0;
}

std::vector<CurveRow> detection_curve(
    const ExperimentConfig& config,
    const std::vector<AdversaryStrategy>& strategies) {
  if (config.n_sweep.empty()) {
    throw std::invalid_argument("detection_curve needs a nonempty n sweep");
  }
  std::vector<CurveRow> rows;
  for (const auto& strategy : strategies) {
    for (int n : config.n_sweep) {
      CurveRow row;
      row.strategy = adversaries::strategy_name(strategy);
      row.n = n;
      row.predicted = predicted_undetected(strategy, n);
      if (n == 0) {
        row.observed = 1.0;
        row.ci95 = 0.0;
      } else {
        ExperimentConfig c = config;
        c.params.n = n;
        c.strategy = strategy;
        const auto report = run_trials(c);
        row.observed = report.undetected_frequency();
        row.ci95 = report.undetected_ci95();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "strategy,n,predicted,observed,ci95\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.6f\n",
                  r.strategy.c_str(), r.n, r.predicted, r.observed, r.ci95);
    out << buf;
  }
  return out.str();
}

EfficiencyReport efficiency_report(const ExperimentConfig& config) {
  ExperimentConfig honest = config;
  honest.strategy = adversaries::Honest{};
  const auto r = run_trials(honest);

  EfficiencyReport e;
  e.n = config.params.n;
  e.total_qubits = config.params.total_qubits();
  e.efficiency = r.efficiency();
  e.nominal_delegated = config.params.nominal_delegated();
  e.nominal_measured = config.params.nominal_measured();
  e.mean_kept = ratio(r.kept_total, r.trials);
  e.mean_measured = ratio(r.measured_total, r.trials);
  e.mean_agreed = r.mean_agreed();
  e.agreed_std_error = r.agreed_std_error();
  e.retained = 2 * static_cast<std::size_t>(config.params.n);
  e.trials = r.trials;
  return e;
}

nlohmann::ordered_json efficiency_json(const EfficiencyReport& e) {
  nlohmann::ordered_json j;
  j["n"] = e.n;
  j["N"] = e.total_qubits;
  j["efficiency"] = e.efficiency;
  j["asymptotic_efficiency"] = e.asymptotic;
  j["baseline_efficiency"] = e.baseline;
  nlohmann::ordered_json b;
  b["transmitted"] = e.total_qubits;
  b["nominal_delegated"] = e.nominal_delegated;
  b["mean_delegated"] = e.mean_kept;
  b["nominal_measured"] = e.nominal_measured;
  b["mean_measured"] = e.mean_measured;
  b["mean_agreed"] = e.mean_agreed;
  b["retained"] = e.retained;
  j["breakdown"] = b;
  j["trials"] = e.trials;
  return j;
}

void export_transcript(const protocol::Transcript& transcript,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open transcript file '" + path.string() +
                             "': " + std::strerror(errno));
  }
  out << io::transcript_jsonl(transcript);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing transcript file '" +
                             path.string() + "'");
  }
}

}  // namespace sqkd::harness
