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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psiopt/analytics.hpp"
#include "psiopt/model.hpp"
#include "psiopt/protocol.hpp"

namespace psiopt {

struct SimConfig {
  Scenario scenario;
  bool record_queries = true;
  std::uint64_t rng_seed = 0;
};

SimConfig MakeSimConfig(const Scenario& s);

struct CostReport {
  std::size_t d = 0;
  std::size_t d_psi = 0;
  std::size_t rank = 0;
  std::size_t alpha = 0;
  std::size_t multiplicity = 0;
  std::map<std::string, std::size_t> phases;
};

struct SimReport {
  IndexSet pstar;
  Transcript transcript;
  CostReport cost;
  CostPrediction prediction;
  bool match = false;         // simulated D == predicted D
  bool oracle_match = false;  // pstar == brute-force optimum
  bool skipped = false;
};

SimReport RunOptimize(const SimConfig& cfg);
SimReport RunNaive(const SimConfig& cfg);

struct ThPsiReport {
  std::size_t cardinality = 0;
  std::optional<IndexSet> intersection;
  Transcript transcript;
  std::size_t d = 0;
  std::size_t d_pred = 0;
  bool match = false;
  bool oracle_match = false;  // cardinality and intersection agree with set algebra
};

ThPsiReport RunThPsi(const SimConfig& cfg, std::size_t threshold);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool Contains(std::size_t v) const { return v >= lo && v <= hi; }
};

/// Parameter grid. Every (K, P1, P2) set pair with K < P1 + P2 in range,
/// every N2, every T; objectives are enumerated over P1 when T^P1 fits
/// max_objectives, otherwise max_objectives seeded random ones are drawn.
struct SweepGrid {
  Range k{4, 6};
  Range n2{2, 4};
  Range t{1, 3};
  std::optional<Range> p1_size;
  std::optional<Range> p2_size;
  std::uint64_t cap = 1'000'000;
  std::uint64_t max_objectives = 100'000;
  std::uint64_t seed = 1;
  // Leakage checks drawn from the grid's (P1, |P2|, f) combinations.
  std::uint64_t leakage_cap = 200;
  std::size_t leakage_max_k = 10;

  // Parses "k=4:8,n2=2:5,t=1:3,p1=4,p2=4,cap=1000000,seed=1,leak=200".
  static SweepGrid Parse(const std::string& spec);
};

inline constexpr std::size_t kMaxGridAlphabet = 14;
inline constexpr std::size_t kMaxGridN2 = 8;
inline constexpr std::size_t kMaxGridT = 8;

struct SweepRow {
  std::size_t k, p1, p2, n2, t;
  std::uint64_t seed;
  std::size_t rank, alpha, multiplicity;
  std::size_t d_sim, d_pred, d_psi;
  bool skipped;
  std::size_t levels;
  bool oracle_match;
};

struct ThPsiRow {
  std::size_t k, p1, p2, n2, threshold;
  std::uint64_t seed;
  std::size_t cardinality;
  std::size_t d_sim, d_pred;
  bool oracle_match;
};

/// Number of optimize rows the grid describes before the cap is applied.
std::uint64_t GridSize(const SweepGrid& g);

std::vector<SweepRow> Sweep(const SweepGrid& g);
std::vector<ThPsiRow> SweepThPsi(const SweepGrid& g);

struct LeakageCheck {
  std::size_t k = 0;
  std::size_t p1 = 0;
  std::size_t p2 = 0;
  bool scheme_equals_nominal = false;
  bool naive_refines_scheme = false;
  bool naive_strictly_finer = false;
  double bits_scheme = 0, bits_nominal = 0, bits_naive = 0;

  bool pass() const;
};

LeakageCheck CheckLeakage(const Scenario& s);
std::vector<LeakageCheck> SweepLeakage(const SweepGrid& g);

struct VerifySummary {
  std::size_t rows = 0;
  std::size_t cost_match = 0;
  std::size_t bound_ok = 0;       // D <= D_PSI
  std::size_t skip_rows = 0;
  std::size_t skip_ok = 0;        // D = ceil((L-1) N2 / (N2-1)) when skipped
  std::size_t oracle_ok = 0;
  std::size_t thpsi_rows = 0;
  std::size_t thpsi_cost_match = 0;
  std::size_t leakage_rows = 0;
  std::size_t leakage_pass = 0;

  bool AllPass() const;
  std::string Format() const;
};

VerifySummary Verify(const SweepGrid& g);

// One row per (T, M).
struct PeqRow {
  std::size_t t, m;
  Rational closed;
  Rational exhaustive;
};

std::vector<PeqRow> PeqTable(std::size_t p1, Range t, Range m);

}  // namespace psiopt
