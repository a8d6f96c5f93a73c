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

// Shared fixtures and independent oracles for the test binaries. Nothing here
// calls into the protocol code paths it is used to check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psiopt/io.hpp"
#include "psiopt/model.hpp"

namespace psiopt::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(PSIOPT_DATA_DIR) + "/" + name;
}

inline Scenario Movies(std::size_t n2 = 2) {
  Scenario s = io::LoadScenario(DataPath("movies.json"));
  s.n2 = n2;
  return s;
}
inline Scenario MoviesMap2(std::size_t n2 = 2) {
  Scenario s = io::LoadScenario(DataPath("movies_map2.json"));
  s.n2 = n2;
  return s;
}
inline Scenario MoviesMap3(std::size_t n2 = 2) {
  Scenario s = io::LoadScenario(DataPath("movies_map3.json"));
  s.n2 = n2;
  return s;
}

inline IndexSet Labels(const Scenario& s, std::initializer_list<const char*> labels) {
  IndexSet out;
  for (const char* l : labels) out.insert(s.alphabet.IndexOf(l));
  return out;
}

inline Scenario MakeScenario(std::size_t k, const IndexSet& p1, const IndexSet& p2,
                             std::vector<int> values, int t, std::size_t n2,
                             std::uint64_t seed = 7, Sense sense = Sense::kMaximize) {
  return Scenario{.alphabet = Alphabet::Numbered(k),
                  .set1 = {.indices = p1, .owner = Entity::kE1},
                  .set2 = {.indices = p2, .owner = Entity::kE2},
                  .objective = Objective(std::move(values), t, sense),
                  .n2 = n2,
                  .n1 = 1,
                  .q = DefaultModulus(p1.size()),
                  .seed = seed};
}

inline IndexSet MaskSet(std::uint32_t mask) {
  IndexSet s;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) s.insert(i + 1);
  }
  return s;
}

// --- oracles ---------------------------------------------------------------

inline IndexSet OracleIntersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  for (auto x : a) {
    if (b.count(x)) out.insert(x);
  }
  return out;
}

// Optimum by scanning the intersection with plain comparisons.
inline IndexSet OracleOptimum(const std::vector<int>& values, const IndexSet& p1,
                              const IndexSet& p2, bool maximize) {
  const IndexSet common = OracleIntersection(p1, p2);
  int best = maximize ? INT32_MIN : INT32_MAX;
  for (auto i : common) {
    best = maximize ? std::max(best, values[i - 1]) : std::min(best, values[i - 1]);
  }
  IndexSet out;
  for (auto i : common) {
    if (values[i - 1] == best) out.insert(i);
  }
  return out;
}

// Downloads for x sequential payloads by walking the database slots one
// query at a time: a round has n2 slots, the first is the reference.
inline std::size_t OracleDownloads(std::size_t x, std::size_t n2) {
  std::size_t downloads = 0;
  std::size_t free_slots = 0;
  for (std::size_t i = 0; i < x; ++i) {
    if (free_slots == 0) {
      downloads += 1;  // reference
      free_slots = n2 - 1;
    }
    downloads += 1;
    free_slots -= 1;
  }
  return downloads;
}

// Stopping rank statistics from set algebra alone (no protocol).
struct OracleStop {
  std::size_t rank = 0, alpha = 0, multiplicity = 0, levels = 0;
  bool skipped = false;
};

inline OracleStop OracleStopRank(const std::vector<int>& values, const IndexSet& p1,
                                 const IndexSet& p2, bool maximize) {
  std::map<int, std::vector<std::size_t>> groups;
  for (auto i : p1) groups[values[i - 1]].push_back(i);
  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [v, g] : groups) ordered.push_back(g);
  if (maximize) std::reverse(ordered.begin(), ordered.end());
  OracleStop out;
  out.levels = ordered.size();
  for (std::size_t r = 0; r < ordered.size(); ++r) {
    std::size_t m = 0;
    for (auto i : ordered[r]) m += p2.count(i);
    if (m > 0) {
      out.rank = r + 1;
      out.alpha = ordered[r].size();
      out.multiplicity = m;
      out.skipped = r + 1 == ordered.size() && ordered[r].size() == 1;
      return out;
    }
  }
  return out;
}

// Exact P(D = D_PSI) via the event {R + alpha_R = P1 + 1, M_R < alpha_R},
// counted over all t^p1 objectives on P1 = {1..p1} with the first m in P2.
inline std::pair<std::uint64_t, std::uint64_t> OraclePeqEvent(std::size_t p1, std::size_t m,
                                                               std::size_t t) {
  IndexSet s1, s2;
  for (std::size_t i = 1; i <= p1; ++i) s1.insert(i);
  for (std::size_t i = 1; i <= m; ++i) s2.insert(i);
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < p1; ++i) space *= t;
  std::uint64_t hits = 0;
  std::vector<int> values(p1);
  for (std::uint64_t code = 0; code < space; ++code) {
    std::uint64_t c = code;
    for (auto& v : values) {
      v = static_cast<int>(c % t) + 1;
      c /= t;
    }
    const OracleStop st = OracleStopRank(values, s1, s2, true);
    if (st.rank + st.alpha == p1 + 1 && st.multiplicity < st.alpha) ++hits;
  }
  return {hits, space};
}

}  // namespace psiopt::testing
