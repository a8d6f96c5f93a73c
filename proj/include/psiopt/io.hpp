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

#pragma once

#include <string>
#include <vector>

#include "psiopt/harness.hpp"

namespace psiopt::io {

/// Scenario JSON:
///   {"alphabet":[...], "set1":[...], "set2":[...],
///    "objective":{"sense":"max","values":{"A":4,...},"T":5},
///    "n2":3, "n1":1, "q":11, "seed":42}
/// "q", "n1", "seed" and "objective.T" are optional. Without q the smallest
/// prime above P1 is used; without T the largest value is used.
Scenario ParseScenario(const std::string& json_text);
Scenario LoadScenario(const std::string& path);
std::string ScenarioToJson(const Scenario& s);

/// One JSON object per message, in issue order.
std::string TranscriptJsonl(const Transcript& t);

std::string CostReportJson(const CostReport& c);
std::string SimReportJson(const SimReport& r, const Alphabet& a);
std::string ThPsiReportJson(const ThPsiReport& r, const Alphabet& a);

std::string SweepCsv(const std::vector<SweepRow>& rows);
std::string ThPsiCsv(const std::vector<ThPsiRow>& rows);
std::string PeqCsv(const std::vector<PeqRow>& rows);
std::string LeakageJson(const Scenario& s, const LeakageReport& rep);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace psiopt::io
