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

// Command-line front end: single runs, detection sweeps, efficiency
// reports and transcript export.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqkd/harness.hpp"
#include "sqkd/postproc.hpp"
#include "sqkd/protocol.hpp"
#include "sqkd/transcript_io.hpp"

namespace {

using namespace sqkd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAbort = 2;

struct ProtocolFlags {
  protocol::ProtocolParams params;
  std::string adversary = "honest";
  std::vector<std::string> adversary_list;
  double deviation_prob = 0.5;
  std::string eve_basis = "uniform";
  double delay = 0.0;
  std::string config;
};

void add_protocol_flags(CLI::App& cmd, ProtocolFlags& f,
                        bool adversary_list = false) {
  auto& p = f.params;
  cmd.add_option("--config", f.config, "Key-value file; flags override it");
  cmd.add_option("--seed", p.seed, "Run seed (master seed for sweeps)");
  cmd.add_option("--n", p.n, "Target sifted-key bits")->check(CLI::PositiveNumber);
  cmd.add_option("--delta", p.delta, "Transmission surplus delta")->check(CLI::NonNegativeNumber);
  cmd.add_option("--theta", p.theta, "Nominal delegation surplus theta")->check(CLI::NonNegativeNumber);
  cmd.add_option("--sigma", p.sigma, "Nominal measurement surplus sigma")->check(CLI::NonNegativeNumber);
  cmd.add_option("--rate", p.rate, "Send rate, qubits per simulated second")->check(CLI::PositiveNumber);
  cmd.add_option("--threshold-l", p.threshold_l, "Bob's speed threshold l")->check(CLI::PositiveNumber);
  cmd.add_option("--latency", p.latency, "Per-hop latency, seconds")->check(CLI::NonNegativeNumber);
  cmd.add_option("--rate-window", p.rate_window, "Arrivals per speed measurement");
  cmd.add_option("--qber-threshold", p.qber_abort_threshold, "Abort when check qber exceeds this")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_flag("--encrypted-preparation", p.alice_encrypted_preparation,
               "Alice pads each state with X^a Z^b");
  cmd.add_flag("--timing-side-channel", p.timing_side_channel,
               "Let adversaries read Bob's keep/discard timing");
  const std::string names =
      "honest | eve-intercept-resend | eve-abstract | charlie-substitute | "
      "charlie-deviation | charlie-bayesian | delaying-relay";
  if (adversary_list) {
    cmd.add_option("--adversary", f.adversary_list, names + " (comma list)")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  } else {
    cmd.add_option("--adversary", f.adversary, names);
  }
  cmd.add_option("--deviation-prob", f.deviation_prob, "charlie-deviation swap probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--eve-basis", f.eve_basis, "uniform | R | D");
  cmd.add_option("--delay", f.delay, "delaying-relay hold time per qubit (0: 1/l)")
      ->check(CLI::NonNegativeNumber);
}

adversaries::AdversaryStrategy parse_strategy(std::string name,
                                              const ProtocolFlags& f) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (name == "honest") return adversaries::Honest{};
  if (name == "eve-intercept-resend" || name == "eve") {
    adversaries::EveInterceptResend s;
    if (f.eve_basis == "R" || f.eve_basis == "r") {
      s.policy = adversaries::BasisPolicy::AlwaysR;
    } else if (f.eve_basis == "D" || f.eve_basis == "d") {
      s.policy = adversaries::BasisPolicy::AlwaysD;
    } else if (f.eve_basis != "uniform") {
      throw std::invalid_argument("unknown --eve-basis '" + f.eve_basis + "'");
    }
    return s;
  }
  if (name == "eve-abstract") return adversaries::EveAbstract{};
  if (name == "charlie-substitute") return adversaries::CharlieSubstitute{};
  if (name == "charlie-deviation") {
    return adversaries::CharlieGateDeviation{f.deviation_prob};
  }
  if (name == "charlie-bayesian") return adversaries::CharlieBayesianGuess{};
  if (name == "delaying-relay" || name == "delay") {
    return adversaries::DelayingRelay{f.delay};
  }
  throw std::invalid_argument("unknown adversary '" + name + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Reads `key = value` lines ('#' starts a comment) and turns the keys the
// chosen subcommand knows into `--key=value` arguments.
std::vector<std::string> config_arguments(const std::string& path,
                                          const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") continue;
    if (cmd.get_option_no_throw("--" + key) == nullptr) continue;
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::optional<std::string> find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

nlohmann::ordered_json postprocess(const protocol::Transcript& t) {
  nlohmann::ordered_json j;
  const auto& a = t.sift.sifted_key_A;
  const auto& b = t.sift.sifted_key_B;
  const double qber = t.check ? t.check->qber : 0.0;
  postproc::ReconcileOptions opts;
  opts.initial_block_size = postproc::block_size_for_qber(std::max(qber, 0.01));
  const auto rec = postproc::reconcile(a, b, opts, t.params.seed);
  j["leaked_bits"] = rec.leaked_bits;
  j["residual_mismatch"] = rec.residual_mismatch;
  try {
    const auto ka = postproc::privacy_amplify(
        a, rec.leaked_bits, postproc::kDefaultSecurityMargin, t.params.seed);
    const auto kb = postproc::privacy_amplify(
        rec.corrected_key, rec.leaked_bits, postproc::kDefaultSecurityMargin,
        t.params.seed);
    j["m"] = ka.key.size();
    j["final_key_A_hex"] = io::bits_to_hex(ka.key);
    j["final_key_B_hex"] = io::bits_to_hex(kb.key);
  } catch (const postproc::KeyExhausted& e) {
    j["m"] = 0;
    j["error"] = "KEY_EXHAUSTED";
  }
  return j;
}

nlohmann::ordered_json adversary_json(const protocol::Transcript& t) {
  nlohmann::ordered_json j;
  j["strategy"] = t.strategy;
  const auto& rep = t.adversary;
  if (rep.intercepted) j["intercepted"] = rep.intercepted;
  if (rep.gate_deviations) j["gate_deviations"] = rep.gate_deviations;
  if (rep.bayesian) {
    j["guesses_hex"] = io::bits_to_hex(rep.bayesian->guesses);
    j["guess_accuracy"] = rep.bayesian->accuracy();
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiquantum key distribution simulator"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ProtocolFlags run_flags, export_flags, sweep_flags, eff_flags;
  std::string run_out, export_out, sweep_out;
  std::vector<int> n_list{1, 2, 4, 8};
  std::size_t sweep_trials = 10000, eff_trials = 1000;
  unsigned sweep_threads = 0, eff_threads = 0;

  auto* run = app.add_subcommand("run", "Single protocol run");
  add_protocol_flags(*run, run_flags);
  run->add_option("--out", run_out, "Also write the transcript here");

  auto* sweep = app.add_subcommand("sweep", "Detection curve as CSV");
  add_protocol_flags(*sweep, sweep_flags, /*adversary_list=*/true);
  sweep->add_option("--n-list", n_list, "Comma-separated n values")->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--trials", sweep_trials, "Runs per (strategy, n)")->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");
  sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

  auto* eff = app.add_subcommand("efficiency", "Qubit efficiency breakdown");
  add_protocol_flags(*eff, eff_flags);
  eff->add_option("--trials", eff_trials, "Honest runs to average")->check(CLI::PositiveNumber);
  eff->add_option("--threads", eff_threads, "Worker threads (0: all cores)");

  auto* exp = app.add_subcommand("export", "Write a run's JSON-lines transcript");
  add_protocol_flags(*exp, export_flags);
  exp->add_option("--out", export_out, "Transcript path")->required();

  // Splice config-file arguments in ahead of the explicit flags so that the
  // latter win under TakeLast.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (auto cfg = find_config(argc, argv); cfg && !args.empty()) {
      const CLI::App* cmd = app.get_subcommand_no_throw(args.front());
      if (cmd == nullptr) throw std::runtime_error("--config needs a subcommand first");
      auto extra = config_arguments(*cfg, *cmd);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*run || *exp) {
      const auto& f = *run ? run_flags : export_flags;
      const auto strategy = parse_strategy(f.adversary, f);
      const auto t = protocol::run_protocol(f.params, strategy);
      const std::string out = *run ? run_out : export_out;
      if (!out.empty()) harness::export_transcript(t, out);
      nlohmann::ordered_json j;
      j["summary"] = io::summary_json(t);
      j["adversary"] = adversary_json(t);
      if (!t.aborted()) j["postprocessing"] = postprocess(t);
      std::cout << j.dump() << "\n";
      return t.aborted() ? kExitAbort : kExitOk;
    }
    if (*sweep) {
      harness::ExperimentConfig config;
      config.params = sweep_flags.params;
      config.master_seed = sweep_flags.params.seed;
      config.trials = sweep_trials;
      config.threads = sweep_threads;
      config.n_sweep = n_list;
      std::vector<adversaries::AdversaryStrategy> strategies;
      for (const auto& name : sweep_flags.adversary_list) {
        strategies.push_back(parse_strategy(name, sweep_flags));
      }
      if (strategies.empty()) strategies.push_back(adversaries::Honest{});
      const std::string csv =
          harness::curve_csv(harness::detection_curve(config, strategies));
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream file(sweep_out, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write '" + sweep_out + "'");
        file << csv;
      }
      return kExitOk;
    }
    if (*eff) {
      harness::ExperimentConfig config;
      config.params = eff_flags.params;
      config.master_seed = eff_flags.params.seed;
      config.trials = eff_trials;
      config.threads = eff_threads;
      std::cout << harness::efficiency_json(harness::efficiency_report(config)).dump()
                << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
