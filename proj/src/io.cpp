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

#include "psiopt/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace psiopt::io {

using nlohmann::ordered_json;

namespace {

ItemIndex LabelIndex(const Alphabet& a, const std::string& label) {
  const auto& labels = a.labels();
  PSIOPT_ENFORCE(std::find(labels.begin(), labels.end(), label) != labels.end(),
                 ErrorCode::kParse, "unknown label '" + label + "'");
  return a.IndexOf(label);
}

FeasibleSet ParseSet(const ordered_json& arr, const Alphabet& a, Entity owner) {
  PSIOPT_ENFORCE(arr.is_array(), ErrorCode::kParse, "feasible set must be a JSON array");
  FeasibleSet s{.indices = {}, .owner = owner};
  for (const auto& item : arr) {
    const ItemIndex i = LabelIndex(a, item.get<std::string>());
    PSIOPT_ENFORCE(s.indices.insert(i).second, ErrorCode::kParse,
                   "duplicate label in feasible set");
  }
  return s;
}

ordered_json SetToJson(const IndexSet& s, const Alphabet& a) {
  ordered_json arr = ordered_json::array();
  for (ItemIndex i : s) arr.push_back(a.label(i));
  return arr;
}

ordered_json CostJson(const CostReport& c) {
  ordered_json j;
  j["D"] = c.d;
  j["D_psi"] = c.d_psi;
  j["R"] = c.rank;
  j["alpha_R"] = c.alpha;
  j["M_R"] = c.multiplicity;
  ordered_json phases = ordered_json::object();
  // Fixed protocol order rather than alphabetical.
  for (const char* p : {"carpsi", "findpsi", "thpsi-car", "thpsi-find", "psi"}) {
    if (auto it = c.phases.find(p); it != c.phases.end()) phases[p] = it->second;
  }
  j["phases"] = phases;
  return j;
}

}  // namespace

Scenario ParseScenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("scenario JSON: ") + e.what());
  }
  try {
    Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
    FeasibleSet s1 = ParseSet(j.at("set1"), alphabet, Entity::kE1);
    FeasibleSet s2 = ParseSet(j.at("set2"), alphabet, Entity::kE2);

    const auto& obj = j.at("objective");
    const std::string sense = obj.value("sense", std::string("max"));
    PSIOPT_ENFORCE(sense == "max" || sense == "min", ErrorCode::kParse,
                   "objective sense must be \"max\" or \"min\"");
    std::vector<int> values(alphabet.size(), 0);
    std::vector<bool> seen(alphabet.size(), false);
    for (const auto& [label, v] : obj.at("values").items()) {
      const ItemIndex i = LabelIndex(alphabet, label);
      const int value = v.get<int>();
      PSIOPT_ENFORCE(value >= 1, ErrorCode::kParse, "objective values must be >= 1");
      values[i - 1] = value;
      seen[i - 1] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      PSIOPT_ENFORCE(seen[i], ErrorCode::kParse,
                     "objective has no value for '" + alphabet.labels()[i] + "'");
    }
    const int max_value = *std::max_element(values.begin(), values.end());
    const int value_count = obj.value("T", max_value);
    PSIOPT_ENFORCE(value_count >= max_value, ErrorCode::kParse,
                   "objective value exceeds T");

    const std::size_t p1 = s1.size();
    Scenario s{.alphabet = std::move(alphabet),
               .set1 = std::move(s1),
               .set2 = std::move(s2),
               .objective = Objective(std::move(values), value_count,
                                      sense == "max" ? Sense::kMaximize : Sense::kMinimize),
               .n2 = j.value("n2", std::size_t{2}),
               .n1 = j.value("n1", std::size_t{1}),
               .q = j.contains("q") ? Prime(j.at("q").get<std::uint64_t>()) : DefaultModulus(p1),
               .seed = j.value("seed", std::uint64_t{0})};
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("scenario JSON: ") + e.what());
  }
}

Scenario LoadScenario(const std::string& path) { return ParseScenario(ReadFile(path)); }

std::string ScenarioToJson(const Scenario& s) {
  ordered_json j;
  j["alphabet"] = s.alphabet.labels();
  j["set1"] = SetToJson(s.set1.indices, s.alphabet);
  j["set2"] = SetToJson(s.set2.indices, s.alphabet);
  ordered_json values = ordered_json::object();
  for (ItemIndex i = 1; i <= s.k(); ++i) values[s.alphabet.label(i)] = s.objective.value(i);
  j["objective"] = {{"sense", s.objective.sense() == Sense::kMaximize ? "max" : "min"},
                    {"values", values},
                    {"T", s.objective.value_count()}};
  j["n2"] = s.n2;
  j["n1"] = s.n1;
  j["q"] = s.q.value();
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

std::string TranscriptJsonl(const Transcript& t) {
  std::string out;
  for (const Message& m : t.messages) {
    ordered_json j;
    j["phase"] = PhaseName(m.phase);
    j["round"] = m.round;
    j["db"] = m.db;
    j["query"] = std::vector<std::uint64_t>(m.query.values().begin(), m.query.values().end());
    j["answer"] = m.answer.value();
    j["downloaded"] = m.downloaded;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string CostReportJson(const CostReport& c) { return CostJson(c).dump() + "\n"; }

std::string SimReportJson(const SimReport& r, const Alphabet& a) {
  ordered_json j;
  j["pstar"] = SetToJson(r.pstar, a);
  j["cost"] = CostJson(r.cost);
  j["predicted_D"] = r.prediction.d;
  j["skipped"] = r.skipped;
  j["match"] = r.match;
  j["oracle_match"] = r.oracle_match;
  return j.dump(2) + "\n";
}

std::string ThPsiReportJson(const ThPsiReport& r, const Alphabet& a) {
  ordered_json j;
  j["M"] = r.cardinality;
  j["intersection"] = r.intersection ? SetToJson(*r.intersection, a) : ordered_json(nullptr);
  j["D"] = r.d;
  j["D_pred"] = r.d_pred;
  j["match"] = r.match;
  j["oracle_match"] = r.oracle_match;
  return j.dump(2) + "\n";
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "K,P1,P2,N2,T,seed,R,alpha_R,M_R,D_sim,D_pred,D_psi\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.p1 << ',' << r.p2 << ',' << r.n2 << ',' << r.t << ',' << r.seed << ','
       << r.rank << ',' << r.alpha << ',' << r.multiplicity << ',' << r.d_sim << ','
       << r.d_pred << ',' << r.d_psi << '\n';
  }
  return os.str();
}

std::string ThPsiCsv(const std::vector<ThPsiRow>& rows) {
  std::ostringstream os;
  os << "K,P1,P2,N2,t,seed,M,D_sim,D_pred\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.p1 << ',' << r.p2 << ',' << r.n2 << ',' << r.threshold << ','
       << r.seed << ',' << r.cardinality << ',' << r.d_sim << ',' << r.d_pred << '\n';
  }
  return os.str();
}

std::string PeqCsv(const std::vector<PeqRow>& rows) {
  std::ostringstream os;
  os << "T,M,p_eq_closed,p_eq_exhaustive\n";
  os << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.t << ',' << r.m << ',' << r.closed.ToDouble() << ',' << r.exhaustive.ToDouble()
       << '\n';
  }
  return os.str();
}

std::string LeakageJson(const Scenario& s, const LeakageReport& rep) {
  auto blocks = [&](const LeakagePartition& p) {
    ordered_json arr = ordered_json::array();
    for (const auto& b : p.blocks) {
      ordered_json block = ordered_json::array();
      for (const auto& set : b) block.push_back(SetToJson(set, s.alphabet));
      arr.push_back(block);
    }
    return arr;
  };
  ordered_json j;
  j["space"] = rep.scheme.space_size();
  j["bits"] = {{"scheme", MutualInformationBits(rep.scheme)},
               {"nominal", MutualInformationBits(rep.nominal)},
               {"naive", MutualInformationBits(rep.naive)}};
  j["scheme_equals_nominal"] = SamePartition(rep.scheme, rep.nominal);
  j["naive_refines_scheme"] = Refines(rep.naive, rep.scheme);
  j["blocks"] = {{"scheme", rep.scheme.blocks.size()},
                 {"nominal", rep.nominal.blocks.size()},
                 {"naive", rep.naive.blocks.size()}};
  j["partitions"] = {{"scheme", blocks(rep.scheme)}, {"naive", blocks(rep.naive)}};
  return j.dump(2) + "\n";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  PSIOPT_ENFORCE(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  PSIOPT_ENFORCE(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  PSIOPT_ENFORCE(out.good(), ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace psiopt::io
