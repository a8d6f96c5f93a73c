// Copyright 2026 The psiopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// psiopt command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "psiopt/psiopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalidScenario = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitVerifyMismatch = 4;

struct StringDeleter {
  void operator()(char* s) const { psiopt_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ScenarioDeleter {
  void operator()(psiopt_scenario* s) const { psiopt_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<psiopt_scenario, ScenarioDeleter>;

struct ReportDeleter {
  void operator()(psiopt_report* r) const { psiopt_report_free(r); }
};
using ReportPtr = std::unique_ptr<psiopt_report, ReportDeleter>;

struct Failure {
  int exit_code;
};

void Check(psiopt_status st, int exit_code = kExitError) {
  if (st == PSIOPT_OK) return;
  std::cerr << "psiopt: " << psiopt_status_name(st) << ": " << psiopt_last_error() << "\n";
  throw Failure{exit_code};
}

CString Take(char* s) { return CString(s); }

void WriteOut(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.good()) {
    std::cerr << "psiopt: cannot write " << path << "\n";
    throw Failure{kExitError};
  }
}

std::pair<size_t, size_t> ParseRange(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const size_t v = std::stoul(text);
      return {v, v};
    }
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    std::cerr << "psiopt: bad range '" << text << "' (expected lo:hi)\n";
    throw Failure{kExitError};
  }
}

std::optional<uint64_t> EnvSeed() {
  const char* env = std::getenv("PSIOPT_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::strtoull(env, nullptr, 10);
}

ScenarioPtr LoadScenario(const std::string& path, std::optional<size_t> n2,
                         std::optional<uint64_t> seed) {
  psiopt_scenario* raw = nullptr;
  Check(psiopt_scenario_load(path.c_str(), &raw), kExitInvalidScenario);
  ScenarioPtr s(raw);
  if (n2) Check(psiopt_scenario_set_n2(s.get(), *n2), kExitInvalidScenario);
  if (auto env = EnvSeed()) Check(psiopt_scenario_set_seed(s.get(), *env));
  if (seed) Check(psiopt_scenario_set_seed(s.get(), *seed));
  return s;
}

struct RunOptions {
  std::string scenario;
  std::optional<size_t> n2;
  std::optional<uint64_t> seed;
  bool naive = false;
  bool json = false;
  std::string transcript;
  std::string cost;
};

int CmdRun(const RunOptions& o) {
  ScenarioPtr s = LoadScenario(o.scenario, o.n2, o.seed);
  psiopt_report* raw = nullptr;
  Check(psiopt_run(s.get(), o.naive ? PSIOPT_SCHEME_NAIVE : PSIOPT_SCHEME_OPTIMIZE, &raw),
        kExitInvalidScenario);
  ReportPtr rep(raw);

  psiopt_cost cost{};
  Check(psiopt_report_cost(rep.get(), &cost));
  char* set = nullptr;
  Check(psiopt_report_set(rep.get(), &set));
  CString set_str = Take(set);

  if (o.json) {
    char* json = nullptr;
    Check(psiopt_report_json(rep.get(), &json));
    std::cout << Take(json).get();
  } else {
    std::cout << "P*=" << set_str.get() << " D=" << cost.download << " D_PSI=" << cost.d_psi
              << "\n";
    if (!o.naive) {
      std::cout << "R=" << cost.rank << " alpha_R=" << cost.alpha << " M_R=" << cost.multiplicity
                << " predicted_D=" << cost.predicted << (cost.skipped ? " (skip rule)" : "")
                << "\n";
    }
    psiopt_leakage leak{};
    if (psiopt_leakage_report(s.get(), &leak, nullptr) == PSIOPT_OK) {
      std::printf("leakage_bits scheme=%.6f nominal=%.6f naive=%.6f\n", leak.bits_scheme,
                  leak.bits_nominal, leak.bits_naive);
    }
  }
  if (!o.transcript.empty()) {
    char* jsonl = nullptr;
    Check(psiopt_report_transcript_jsonl(rep.get(), &jsonl));
    WriteOut(o.transcript, Take(jsonl).get());
  }
  if (!o.cost.empty()) {
    char* json = nullptr;
    Check(psiopt_report_cost_json(rep.get(), &json));
    WriteOut(o.cost, Take(json).get());
  }
  if (!cost.oracle_match || !cost.match) {
    std::cerr << "psiopt: result disagrees with "
              << (cost.oracle_match ? "the cost formula" : "the brute-force optimum") << "\n";
    return kExitOracleMismatch;
  }
  return kExitOk;
}

struct ThPsiOptions {
  std::string scenario;
  std::optional<size_t> n2;
  std::optional<uint64_t> seed;
  size_t threshold = 1;
  std::string transcript;
};

int CmdThPsi(const ThPsiOptions& o) {
  ScenarioPtr s = LoadScenario(o.scenario, o.n2, o.seed);
  psiopt_report* raw = nullptr;
  Check(psiopt_run_thpsi(s.get(), o.threshold, &raw), kExitInvalidScenario);
  ReportPtr rep(raw);
  psiopt_cost cost{};
  Check(psiopt_report_cost(rep.get(), &cost));
  char* set = nullptr;
  Check(psiopt_report_set(rep.get(), &set));
  CString set_str = Take(set);
  std::cout << "M=" << cost.multiplicity << " t=" << o.threshold
            << " intersection=" << (cost.has_set ? set_str.get() : "withheld")
            << " D=" << cost.download << " D_ThPSI=" << cost.predicted << "\n";
  if (!o.transcript.empty()) {
    char* jsonl = nullptr;
    Check(psiopt_report_transcript_jsonl(rep.get(), &jsonl));
    WriteOut(o.transcript, Take(jsonl).get());
  }
  return cost.match && cost.oracle_match ? kExitOk : kExitOracleMismatch;
}

int CmdSweep(const std::string& grid, const std::string& out, bool thpsi) {
  char* csv = nullptr;
  Check(thpsi ? psiopt_thpsi_sweep_csv(grid.c_str(), &csv) : psiopt_sweep_csv(grid.c_str(), &csv));
  WriteOut(out, Take(csv).get());
  return kExitOk;
}

int CmdPeq(size_t p1, const std::string& t_range, const std::string& m_range,
           const std::string& out) {
  const auto [t_lo, t_hi] = ParseRange(t_range);
  const auto [m_lo, m_hi] = ParseRange(m_range);
  char* csv = nullptr;
  int equal = 0;
  Check(psiopt_peq_csv(p1, t_lo, t_hi, m_lo, m_hi, &csv, &equal));
  WriteOut(out, Take(csv).get());
  if (!equal) {
    std::cerr << "psiopt: closed form and enumeration disagree\n";
    return kExitOracleMismatch;
  }
  return kExitOk;
}

int CmdLeakage(const std::string& scenario, const std::string& out) {
  ScenarioPtr s = LoadScenario(scenario, std::nullopt, std::nullopt);
  psiopt_leakage leak{};
  char* json = nullptr;
  Check(psiopt_leakage_report(s.get(), &leak, &json));
  CString json_str = Take(json);
  if (!out.empty()) WriteOut(out, json_str.get());
  std::printf("space=%zu scheme=%.6f nominal=%.6f naive=%.6f bits\n", leak.space,
              leak.bits_scheme, leak.bits_nominal, leak.bits_naive);
  std::printf("scheme==nominal: %s  naive refines scheme: %s%s\n",
              leak.scheme_equals_nominal ? "yes" : "no", leak.naive_refines_scheme ? "yes" : "no",
              leak.naive_strictly_finer ? " (strictly)" : "");
  return leak.scheme_equals_nominal && leak.naive_refines_scheme ? kExitOk : kExitOracleMismatch;
}

int CmdVerify(const std::string& grid) {
  psiopt_verify_summary v{};
  char* text = nullptr;
  Check(psiopt_verify(grid.c_str(), &v, &text));
  std::cout << Take(text).get() << "\n";
  return v.all_pass ? kExitOk : kExitVerifyMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private two-agent optimization over SPIR: simulator and verifier"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", psiopt_version());

  RunOptions run;
  size_t run_n2 = 0;
  uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Find P* for a scenario and report the download cost");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON file")->required();
  auto* run_n2_opt = run_cmd->add_option("--n2", run_n2, "Override the number of server databases");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "Override the scenario seed");
  run_cmd->add_flag("--naive", run.naive, "Run the naive PSI baseline instead");
  run_cmd->add_flag("--json", run.json, "Print the report as JSON");
  run_cmd->add_option("--transcript", run.transcript, "Write the transcript as JSONL ('-' = stdout)");
  run_cmd->add_option("--cost", run.cost, "Write the cost report JSON ('-' = stdout)");

  ThPsiOptions th;
  size_t th_n2 = 0;
  uint64_t th_seed = 0;
  auto* th_cmd = app.add_subcommand("thpsi", "Threshold PSI on a scenario's feasible sets");
  th_cmd->add_option("scenario", th.scenario, "Scenario JSON file")->required();
  th_cmd->add_option("-t,--threshold", th.threshold, "Threshold t >= 1")->required();
  auto* th_n2_opt = th_cmd->add_option("--n2", th_n2, "Override the number of server databases");
  auto* th_seed_opt = th_cmd->add_option("--seed", th_seed, "Override the scenario seed");
  th_cmd->add_option("--transcript", th.transcript, "Write the transcript as JSONL");

  std::string sweep_grid;
  std::string sweep_out;
  bool sweep_thpsi = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Simulate every scenario of a grid, emit CSV");
  sweep_cmd->add_option("--grid", sweep_grid, "Grid, e.g. k=4:6,n2=2:4,t=1:3,cap=1000000");
  sweep_cmd->add_option("--out", sweep_out, "Output CSV path (default stdout)");
  sweep_cmd->add_flag("--thpsi", sweep_thpsi, "Sweep ThPSI over thresholds 1..P1 instead");

  size_t peq_p1 = 5;
  std::string peq_t = "2:10";
  std::string peq_m = "1:4";
  std::string peq_out;
  auto* peq_cmd = app.add_subcommand("peq", "P(D = D_PSI) by closed form and by enumeration");
  peq_cmd->add_option("--p1", peq_p1, "Size of P1")->capture_default_str();
  peq_cmd->add_option("--t-range", peq_t, "Value-count range lo:hi")->capture_default_str();
  peq_cmd->add_option("--m-range", peq_m, "Intersection-size range lo:hi")->capture_default_str();
  peq_cmd->add_option("--out", peq_out, "Output CSV path (default stdout)");

  std::string leak_scenario;
  std::string leak_out;
  auto* leak_cmd = app.add_subcommand("leakage", "Exact leakage partitions for a scenario");
  leak_cmd->add_option("scenario", leak_scenario, "Scenario JSON file")->required();
  leak_cmd->add_option("--out", leak_out, "Write partitions as JSON");

  std::string verify_grid;
  auto* verify_cmd = app.add_subcommand("verify", "Check cost formulas and leakage over a grid");
  verify_cmd->add_option("--grid", verify_grid, "Grid, e.g. k=4:6,n2=2:4,t=1:3");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (run_n2_opt->count() > 0) run.n2 = run_n2;
      if (run_seed_opt->count() > 0) run.seed = run_seed;
      return CmdRun(run);
    }
    if (th_cmd->parsed()) {
      if (th_n2_opt->count() > 0) th.n2 = th_n2;
      if (th_seed_opt->count() > 0) th.seed = th_seed;
      return CmdThPsi(th);
    }
    if (sweep_cmd->parsed()) return CmdSweep(sweep_grid, sweep_out, sweep_thpsi);
    if (peq_cmd->parsed()) return CmdPeq(peq_p1, peq_t, peq_m, peq_out);
    if (leak_cmd->parsed()) return CmdLeakage(leak_scenario, leak_out);
    if (verify_cmd->parsed()) return CmdVerify(verify_grid);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitError;
}
