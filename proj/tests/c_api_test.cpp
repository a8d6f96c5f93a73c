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

#include <algorithm>
#include <cstring>
#include <string>

#include "doctest.h"
#include "psiopt/psiopt.h"

namespace {

std::string Data(const char* name) { return std::string(PSIOPT_DATA_DIR) + "/" + name; }

std::string Take(char* s) {
  std::string out = s ? s : "";
  psiopt_string_free(s);
  return out;
}

struct ScenarioPtr {
  psiopt_scenario* p = nullptr;
  ~ScenarioPtr() { psiopt_scenario_free(p); }
};

struct ReportPtr {
  psiopt_report* p = nullptr;
  ~ReportPtr() { psiopt_report_free(p); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(psiopt_version()) == "1.0.0");
  CHECK(std::string(psiopt_status_name(PSIOPT_OK)) == "ok");
  CHECK(std::string(psiopt_status_name(PSIOPT_ERR_PARSE)) != "ok");
  CHECK(psiopt_d_psi(5, 2) == 10);
  CHECK(psiopt_d_psi(5, 3) == 8);
}

TEST_CASE("null arguments") {
  psiopt_scenario* s = nullptr;
  CHECK(psiopt_scenario_load(nullptr, &s) == PSIOPT_ERR_NULL_ARGUMENT);
  CHECK(psiopt_scenario_parse("{}", nullptr) == PSIOPT_ERR_NULL_ARGUMENT);
  CHECK(psiopt_run(nullptr, PSIOPT_SCHEME_OPTIMIZE, nullptr) == PSIOPT_ERR_NULL_ARGUMENT);
  psiopt_cost cost;
  CHECK(psiopt_report_cost(nullptr, &cost) == PSIOPT_ERR_NULL_ARGUMENT);
  CHECK(std::strlen(psiopt_last_error()) > 0);
  psiopt_scenario_free(nullptr);
  psiopt_report_free(nullptr);
  psiopt_string_free(nullptr);
}

TEST_CASE("load errors map to status codes") {
  ScenarioPtr s;
  CHECK(psiopt_scenario_load("/nonexistent.json", &s.p) == PSIOPT_ERR_IO);
  CHECK(s.p == nullptr);
  CHECK(std::string(psiopt_last_error()).find("cannot open") != std::string::npos);
  CHECK(psiopt_scenario_parse("{not json", &s.p) == PSIOPT_ERR_PARSE);
  CHECK(psiopt_scenario_parse(R"({"alphabet":["x","y"],"set1":["x"],"set2":["y"],
                                  "objective":{"values":{"x":1,"y":1}}})",
                              &s.p) == PSIOPT_ERR_MODEL_VIOLATION);
}

TEST_CASE("run the movie scenario") {
  ScenarioPtr s;
  REQUIRE(psiopt_scenario_load(Data("movies.json").c_str(), &s.p) == PSIOPT_OK);

  ReportPtr r;
  REQUIRE(psiopt_run(s.p, PSIOPT_SCHEME_OPTIMIZE, &r.p) == PSIOPT_OK);
  psiopt_cost cost{};
  REQUIRE(psiopt_report_cost(r.p, &cost) == PSIOPT_OK);
  CHECK(cost.download == 6);
  CHECK(cost.predicted == 6);
  CHECK(cost.d_psi == 8);
  CHECK(cost.rank == 1);
  CHECK(cost.alpha == 3);
  CHECK(cost.multiplicity == 2);
  CHECK(cost.match == 1);
  CHECK(cost.oracle_match == 1);

  char* text = nullptr;
  REQUIRE(psiopt_report_set(r.p, &text) == PSIOPT_OK);
  CHECK(Take(text) == "{C,G}");
  REQUIRE(psiopt_report_cost_json(r.p, &text) == PSIOPT_OK);
  CHECK(Take(text).find("\"D\":6,\"D_psi\":8") != std::string::npos);
  REQUIRE(psiopt_report_transcript_jsonl(r.p, &text) == PSIOPT_OK);
  const std::string jsonl = Take(text);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 6);
  REQUIRE(psiopt_report_json(r.p, &text) == PSIOPT_OK);
  CHECK(Take(text).find("\"pstar\"") != std::string::npos);

  REQUIRE(psiopt_scenario_set_n2(s.p, 3) == PSIOPT_OK);
  ReportPtr r3;
  REQUIRE(psiopt_run(s.p, PSIOPT_SCHEME_OPTIMIZE, &r3.p) == PSIOPT_OK);
  REQUIRE(psiopt_report_cost(r3.p, &cost) == PSIOPT_OK);
  CHECK(cost.download == 5);
  CHECK(psiopt_scenario_set_n2(s.p, 1) == PSIOPT_ERR_INVALID_ARGUMENT);

  ReportPtr naive;
  REQUIRE(psiopt_scenario_set_n2(s.p, 2) == PSIOPT_OK);
  REQUIRE(psiopt_run(s.p, PSIOPT_SCHEME_NAIVE, &naive.p) == PSIOPT_OK);
  REQUIRE(psiopt_report_cost(naive.p, &cost) == PSIOPT_OK);
  CHECK(cost.download == 8);
}

TEST_CASE("seed changes the transcript but not the cost") {
  ScenarioPtr s;
  REQUIRE(psiopt_scenario_load(Data("movies.json").c_str(), &s.p) == PSIOPT_OK);
  ReportPtr a, b;
  REQUIRE(psiopt_run(s.p, PSIOPT_SCHEME_OPTIMIZE, &a.p) == PSIOPT_OK);
  REQUIRE(psiopt_scenario_set_seed(s.p, 1234) == PSIOPT_OK);
  REQUIRE(psiopt_run(s.p, PSIOPT_SCHEME_OPTIMIZE, &b.p) == PSIOPT_OK);
  char* ta = nullptr;
  char* tb = nullptr;
  REQUIRE(psiopt_report_transcript_jsonl(a.p, &ta) == PSIOPT_OK);
  REQUIRE(psiopt_report_transcript_jsonl(b.p, &tb) == PSIOPT_OK);
  CHECK(Take(ta) != Take(tb));

  char* json = nullptr;
  REQUIRE(psiopt_scenario_to_json(s.p, &json) == PSIOPT_OK);
  CHECK(Take(json).find("1234") != std::string::npos);
}

TEST_CASE("thpsi through the C API") {
  ScenarioPtr s;
  REQUIRE(psiopt_scenario_load(Data("movies.json").c_str(), &s.p) == PSIOPT_OK);
  ReportPtr r;
  REQUIRE(psiopt_run_thpsi(s.p, 5, &r.p) == PSIOPT_OK);
  psiopt_cost cost{};
  REQUIRE(psiopt_report_cost(r.p, &cost) == PSIOPT_OK);
  CHECK(cost.multiplicity == 3);
  CHECK(cost.has_set == 0);
  CHECK(cost.download == 2);
  char* text = nullptr;
  REQUIRE(psiopt_report_set(r.p, &text) == PSIOPT_OK);
  CHECK(Take(text) == "{}");

  ReportPtr r2;
  REQUIRE(psiopt_run_thpsi(s.p, 2, &r2.p) == PSIOPT_OK);
  REQUIRE(psiopt_report_set(r2.p, &text) == PSIOPT_OK);
  CHECK(Take(text) == "{C,D,G}");
  CHECK(psiopt_run_thpsi(s.p, 0, &r2.p) == PSIOPT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("analytics through the C API") {
  ScenarioPtr s;
  REQUIRE(psiopt_scenario_load(Data("movies.json").c_str(), &s.p) == PSIOPT_OK);
  psiopt_leakage leak{};
  REQUIRE(psiopt_leakage_report(s.p, &leak, nullptr) == PSIOPT_OK);
  CHECK(leak.scheme_equals_nominal == 1);
  CHECK(leak.naive_strictly_finer == 1);
  CHECK(leak.space == 56);
  CHECK(leak.bits_scheme < leak.bits_naive);

  char* csv = nullptr;
  int all_equal = 0;
  REQUIRE(psiopt_peq_csv(5, 2, 2, 1, 4, &csv, &all_equal) == PSIOPT_OK);
  CHECK(all_equal == 1);
  CHECK(Take(csv).find("2,4,0.0625,0.0625") != std::string::npos);

  REQUIRE(psiopt_sweep_csv("k=4,n2=2,t=1", &csv) == PSIOPT_OK);
  CHECK(Take(csv).rfind("K,P1,P2,N2,T,seed,", 0) == 0);
  CHECK(psiopt_sweep_csv("k=99", &csv) != PSIOPT_OK);
  REQUIRE(psiopt_thpsi_sweep_csv("k=4,n2=2,t=1", &csv) == PSIOPT_OK);
  CHECK(Take(csv).rfind("K,P1,P2,N2,t,", 0) == 0);

  psiopt_verify_summary v{};
  char* text = nullptr;
  REQUIRE(psiopt_verify("k=4,n2=2:3,t=1:2,leak=5", &v, &text) == PSIOPT_OK);
  CHECK(v.all_pass == 1);
  CHECK(v.rows == v.cost_match);
  CHECK(Take(text).find("theorem2: 100%") != std::string::npos);
}
