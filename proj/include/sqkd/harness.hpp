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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqkd/adversaries.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd::harness {

struct ExperimentConfig {
  protocol::ProtocolParams params;
  adversaries::AdversaryStrategy strategy = adversaries::Honest{};
  std::size_t trials = 1000;
  std::vector<int> n_sweep;
  std::string output_path;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument when trials is 0 or params are invalid.
  void validate() const;
};

/// Seed of trial `index`: a pure function of (master_seed, index).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index);

/// 1.96 * sqrt(p (1 - p) / trials).
double confidence_radius95(double p, std::size_t trials);

/// Aggregates over one configuration. Raw tallies are integers so that the
/// totals do not depend on how trials were split across threads.
struct ExperimentReport {
  std::string strategy;
  int n = 0;
  std::size_t total_qubits = 0;
  std::size_t trials = 0;

  std::size_t checked = 0;     // runs that reached the error check
  std::size_t undetected = 0;  // of those, runs that passed it
  std::size_t aborts = 0;
  std::array<std::size_t, 4> aborts_by_reason{};  // indexed by AbortReason

  std::size_t check_bits = 0;
  std::size_t check_disagreements = 0;
  std::size_t sifted_positions = 0;  // all 2n positions of sifted runs
  std::size_t sifted_agreements = 0;

  std::size_t kept_total = 0;
  std::size_t measured_total = 0;
  std::size_t agreed_total = 0;
  std::size_t agreed_sq_total = 0;

  std::size_t guessed_bits = 0;
  std::size_t guessed_correct = 0;

  double undetected_frequency() const;
  double undetected_ci95() const;
  double mean_qber() const;
  double abort_rate() const;
  double position_agreement() const;
  /// Retained sifted bits over transmitted qubits, 2n / N.
  double efficiency() const;
  double mean_agreed() const;
  double agreed_std_error() const;
  double guess_accuracy() const;

  void merge(const ExperimentReport& other);
};

ExperimentReport run_trials(const ExperimentConfig& config);

nlohmann::ordered_json report_json(const ExperimentReport& report);

/// Closed-form probability that a run passing the sifting stage also passes
/// the error check: 1 for protocol-honest strategies, (3/4)^n, (5/8)^n,
/// (1/2)^n, (1 - p)^n. NaN when no closed form exists.
double predicted_undetected(const adversaries::AdversaryStrategy& strategy,
                            int n);

struct CurveRow {
  std::string strategy;
  int n = 0;
  double predicted = 0.0;
  double observed = 0.0;
  double ci95 = 0.0;
};

/// One row per n in config.n_sweep per strategy. n = 0 rows are vacuous:
/// an empty check set never detects.
std::vector<CurveRow> detection_curve(
    const ExperimentConfig& config,
    const std::vector<adversaries::AdversaryStrategy>& strategies);

/// Header `strategy,n,predicted,observed,ci95`, one line per row.
std::string curve_csv(const std::vector<CurveRow>& rows);

inline constexpr double kBaselineEfficiency = 0.25;
inline constexpr double kAsymptoticEfficiency = 0.125;

struct EfficiencyReport {
  int n = 0;
  std::size_t total_qubits = 0;
  double efficiency = 0.0;  // 2n / N
  double asymptotic = kAsymptoticEfficiency;
  double baseline = kBaselineEfficiency;
  double nominal_delegated = 0.0;
  double nominal_measured = 0.0;
  double mean_kept = 0.0;
  double mean_measured = 0.0;
  double mean_agreed = 0.0;
  double agreed_std_error = 0.0;
  std::size_t retained = 0;  // 2n
  std::size_t trials = 0;
};

/// Honest runs only; the configured strategy is ignored.
EfficiencyReport efficiency_report(const ExperimentConfig& config);

nlohmann::ordered_json efficiency_json(const EfficiencyReport& report);

/// Writes the JSON-lines transcript. Throws std::runtime_error naming the
/// path on any filesystem failure.
void export_transcript(const protocol::Transcript& transcript,
                       const std::filesystem::path& path);

}  // namespace sqkd::harness
