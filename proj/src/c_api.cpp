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

#include "psiopt/psiopt.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <variant>

#include "psiopt/analytics.hpp"
#include "psiopt/harness.hpp"
#include "psiopt/io.hpp"

struct psiopt_scenario {
  psiopt::Scenario scenario;
};

struct psiopt_report {
  psiopt::Alphabet alphabet;
  std::variant<psiopt::SimReport, psiopt::ThPsiReport> result;
};

namespace {

thread_local std::string g_last_error;

psiopt_status Fail(psiopt_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename Fn>
psiopt_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PSIOPT_OK;
  } catch (const psiopt::Error& e) {
    return Fail(static_cast<psiopt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PSIOPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PSIOPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(PSIOPT_ERR_INTERNAL, "unknown error");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define PSIOPT_REQUIRE(ptr)                                                  \
  do {                                                                       \
    if ((ptr) == nullptr) return Fail(PSIOPT_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

psiopt::SweepGrid GridFrom(const char* grid) {
  return grid == nullptr ? psiopt::SweepGrid{} : psiopt::SweepGrid::Parse(grid);
}

}  // namespace

extern "C" {

const char* psiopt_version(void) { return "1.0.0"; }

const char* psiopt_last_error(void) { return g_last_error.c_str(); }

const char* psiopt_status_name(psiopt_status status) {
  switch (status) {
    case PSIOPT_OK: return "ok";
    case PSIOPT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PSIOPT_ERR_MODULUS_MISMATCH: return "modulus mismatch";
    case PSIOPT_ERR_LENGTH_MISMATCH: return "length mismatch";
    case PSIOPT_ERR_OUT_OF_RANGE: return "out of range";
    case PSIOPT_ERR_RANDOMNESS_EXHAUSTED: return "randomness exhausted";
    case PSIOPT_ERR_PROTOCOL_CORRUPTION: return "protocol corruption";
    case PSIOPT_ERR_MODEL_VIOLATION: return "model violation";
    case PSIOPT_ERR_TOO_LARGE: return "too large";
    case PSIOPT_ERR_PARSE: return "parse error";
    case PSIOPT_ERR_IO: return "i/o error";
    case PSIOPT_ERR_NULL_ARGUMENT: return "null argument";
    case PSIOPT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void psiopt_string_free(char* s) { std::free(s); }

psiopt_status psiopt_scenario_load(const char* path, psiopt_scenario** out) {
  PSIOPT_REQUIRE(path);
  PSIOPT_REQUIRE(out);
  return Guard([&] { *out = new psiopt_scenario{psiopt::io::LoadScenario(path)}; });
}

psiopt_status psiopt_scenario_parse(const char* json, psiopt_scenario** out) {
  PSIOPT_REQUIRE(json);
  PSIOPT_REQUIRE(out);
  return Guard([&] { *out = new psiopt_scenario{psiopt::io::ParseScenario(json)}; });
}

void psiopt_scenario_free(psiopt_scenario* s) { delete s; }

psiopt_status psiopt_scenario_set_n2(psiopt_scenario* s, size_t n2) {
  PSIOPT_REQUIRE(s);
  return Guard([&] {
    psiopt::Scenario copy = s->scenario;
    copy.n2 = n2;
    copy.Validate();
    s->scenario = std::move(copy);
  });
}

psiopt_status psiopt_scenario_set_seed(psiopt_scenario* s, uint64_t seed) {
  PSIOPT_REQUIRE(s);
  s->scenario.seed = seed;
  return PSIOPT_OK;
}

psiopt_status psiopt_scenario_to_json(const psiopt_scenario* s, char** out) {
  PSIOPT_REQUIRE(s);
  PSIOPT_REQUIRE(out);
  return Guard([&] { *out = Dup(psiopt::io::ScenarioToJson(s->scenario)); });
}

psiopt_status psiopt_run(const psiopt_scenario* s, psiopt_scheme scheme, psiopt_report** out) {
  PSIOPT_REQUIRE(s);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    const psiopt::SimConfig cfg = psiopt::MakeSimConfig(s->scenario);
    psiopt::SimReport rep;
    switch (scheme) {
      case PSIOPT_SCHEME_OPTIMIZE: rep = psiopt::RunOptimize(cfg); break;
      case PSIOPT_SCHEME_NAIVE: rep = psiopt::RunNaive(cfg); break;
      default:
        throw psiopt::Error(psiopt::ErrorCode::kInvalidArgument, "unknown scheme");
    }
    *out = new psiopt_report{s->scenario.alphabet, std::move(rep)};
  });
}

psiopt_status psiopt_run_thpsi(const psiopt_scenario* s, size_t threshold, psiopt_report** out) {
  PSIOPT_REQUIRE(s);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    psiopt::ThPsiReport rep = psiopt::RunThPsi(psiopt::MakeSimConfig(s->scenario), threshold);
    *out = new psiopt_report{s->scenario.alphabet, std::move(rep)};
  });
}

void psiopt_report_free(psiopt_report* r) { delete r; }

psiopt_status psiopt_report_cost(const psiopt_report* r, psiopt_cost* out) {
  PSIOPT_REQUIRE(r);
  PSIOPT_REQUIRE(out);
  *out = psiopt_cost{};
  if (const auto* sim = std::get_if<psiopt::SimReport>(&r->result)) {
    out->download = sim->cost.d;
    out->predicted = sim->prediction.d;
    out->d_psi = sim->cost.d_psi;
    out->rank = sim->cost.rank;
    out->alpha = sim->cost.alpha;
    out->multiplicity = sim->cost.multiplicity;
    out->skipped = sim->skipped;
    out->match = sim->match;
    out->oracle_match = sim->oracle_match;
    out->has_set = 1;
  } else {
    const auto& th = std::get<psiopt::ThPsiReport>(r->result);
    out->download = th.d;
    out->predicted = th.d_pred;
    out->multiplicity = th.cardinality;
    out->match = th.match;
    out->oracle_match = th.oracle_match;
    out->has_set = th.intersection.has_value();
  }
  return PSIOPT_OK;
}

psiopt_status psiopt_report_set(const psiopt_report* r, char** out) {
  PSIOPT_REQUIRE(r);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    psiopt::IndexSet set;
    if (const auto* sim = std::get_if<psiopt::SimReport>(&r->result)) {
      set = sim->pstar;
    } else if (const auto& th = std::get<psiopt::ThPsiReport>(r->result); th.intersection) {
      set = *th.intersection;
    }
    *out = Dup(psiopt::FormatSet(set, r->alphabet));
  });
}

psiopt_status psiopt_report_json(const psiopt_report* r, char** out) {
  PSIOPT_REQUIRE(r);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    if (const auto* sim = std::get_if<psiopt::SimReport>(&r->result)) {
      *out = Dup(psiopt::io::SimReportJson(*sim, r->alphabet));
    } else {
      *out = Dup(psiopt::io::ThPsiReportJson(std::get<psiopt::ThPsiReport>(r->result), r->alphabet));
    }
  });
}

psiopt_status psiopt_report_cost_json(const psiopt_report* r, char** out) {
  PSIOPT_REQUIRE(r);
  PSIOPT_REQUIRE(out);
  const auto* sim = std::get_if<psiopt::SimReport>(&r->result);
  if (sim == nullptr) {
    return Fail(PSIOPT_ERR_INVALID_ARGUMENT, "cost report JSON is defined for optimize/naive runs");
  }
  return Guard([&] { *out = Dup(psiopt::io::CostReportJson(sim->cost)); });
}

psiopt_status psiopt_report_transcript_jsonl(const psiopt_report* r, char** out) {
  PSIOPT_REQUIRE(r);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    const psiopt::Transcript& t = std::visit(
        [](const auto& rep) -> const psiopt::Transcript& { return rep.transcript; }, r->result);
    *out = Dup(psiopt::io::TranscriptJsonl(t));
  });
}

size_t psiopt_d_psi(size_t p1, size_t n2) { return n2 < 2 ? 0 : psiopt::DPsi(p1, n2); }

psiopt_status psiopt_leakage_report(const psiopt_scenario* s, psiopt_leakage* out,
                                    char** json_out) {
  PSIOPT_REQUIRE(s);
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    const psiopt::LeakageReport rep = psiopt::LeakagePartitions(s->scenario);
    out->bits_scheme = psiopt::MutualInformationBits(rep.scheme);
    out->bits_nominal = psiopt::MutualInformationBits(rep.nominal);
    out->bits_naive = psiopt::MutualInformationBits(rep.naive);
    out->space = rep.scheme.space_size();
    out->scheme_equals_nominal = psiopt::SamePartition(rep.scheme, rep.nominal);
    out->naive_refines_scheme = psiopt::Refines(rep.naive, rep.scheme);
    out->naive_strictly_finer =
        out->naive_refines_scheme && rep.naive.blocks.size() > rep.scheme.blocks.size();
    if (json_out != nullptr) *json_out = Dup(psiopt::io::LeakageJson(s->scenario, rep));
  });
}

psiopt_status psiopt_peq_csv(size_t p1, size_t t_lo, size_t t_hi, size_t m_lo, size_t m_hi,
                             char** csv_out, int* all_equal) {
  PSIOPT_REQUIRE(csv_out);
  return Guard([&] {
    const auto rows = psiopt::PeqTable(p1, {t_lo, t_hi}, {m_lo, m_hi});
    bool equal = true;
    for (const auto& row : rows) equal = equal && row.closed == row.exhaustive;
    *csv_out = Dup(psiopt::io::PeqCsv(rows));
    if (all_equal != nullptr) *all_equal = equal;
  });
}

psiopt_status psiopt_sweep_csv(const char* grid, char** csv_out) {
  PSIOPT_REQUIRE(csv_out);
  return Guard([&] { *csv_out = Dup(psiopt::io::SweepCsv(psiopt::Sweep(GridFrom(grid)))); });
}

psiopt_status psiopt_thpsi_sweep_csv(const char* grid, char** csv_out) {
  PSIOPT_REQUIRE(csv_out);
  return Guard([&] { *csv_out = Dup(psiopt::io::ThPsiCsv(psiopt::SweepThPsi(GridFrom(grid)))); });
}

psiopt_status psiopt_verify(const char* grid, psiopt_verify_summary* out, char** text_out) {
  PSIOPT_REQUIRE(out);
  return Guard([&] {
    const psiopt::VerifySummary v = psiopt::Verify(GridFrom(grid));
    *out = psiopt_verify_summary{.rows = v.rows,
                                 .cost_match = v.cost_match,
                                 .bound_ok = v.bound_ok,
                                 .skip_rows = v.skip_rows,
                                 .skip_ok = v.skip_ok,
                                 .oracle_ok = v.oracle_ok,
                                 .thpsi_rows = v.thpsi_rows,
                                 .thpsi_cost_match = v.thpsi_cost_match,
                                 .leakage_rows = v.leakage_rows,
                                 .leakage_pass = v.leakage_pass,
                                 .all_pass = v.AllPass()};
    if (text_out != nullptr) *text_out = Dup(v.Format());
  });
}

}  // extern "C"
