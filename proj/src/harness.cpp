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

#include "psiopt/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace psiopt {
namespace {

IndexSet MaskToSet(std::uint32_t mask) {
  IndexSet s;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) s.insert(i + 1);
  }
  return s;
}

std::size_t PhaseTotal(const Transcript& t, Phase p) { return t.DownloadsIn(p); }

CostReport MakeCostReport(const Transcript& t, std::size_t p1, std::size_t n2) {
  CostReport c;
  c.d = t.total_download;
  c.d_psi = DPsi(p1, n2);
  for (Phase p : {Phase::kCarPsi, Phase::kFindPsi, Phase::kThPsiCar, Phase::kThPsiFind,
                  Phase::kPsi}) {
    if (const std::size_t n = PhaseTotal(t, p); n > 0) c.phases[std::string(PhaseName(p))] = n;
  }
  return c;
}

// Runs fn(i) for i in [0, n) across worker threads; fn writes to slot i only.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 32);
  if (n < 256 || workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Scenario GridScenario(std::size_t k, std::uint32_t p1_mask, std::uint32_t p2_mask,
                      std::vector<int> values, int t, std::size_t n2, std::uint64_t seed) {
  const IndexSet s1 = MaskToSet(p1_mask);
  return Scenario{.alphabet = Alphabet::Numbered(k),
                  .set1 = {.indices = s1, .owner = Entity::kE1},
                  .set2 = {.indices = MaskToSet(p2_mask), .owner = Entity::kE2},
                  .objective = Objective(std::move(values), t, Sense::kMaximize),
                  .n2 = n2,
                  .n1 = 1,
                  .q = DefaultModulus(s1.size()),
                  .seed = seed};
}

std::uint64_t SaturatingPow(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > limit / std::max<std::uint64_t>(base, 1)) return limit + 1;
    out *= base;
  }
  return out;
}

struct OptimizeRowSpec {
  std::size_t k;
  std::uint32_t p1_mask, p2_mask;
  std::size_t t;
  std::uint64_t objective;  // digit code, or random-draw index
  bool random_objective;
  std::size_t n2;
  std::uint64_t index;
};

inline constexpr std::uint64_t kMaxGridIterations = 500'000'000;

void CheckGrid(const SweepGrid& g) {
  PSIOPT_ENFORCE(g.k.lo >= 1 && g.k.lo <= g.k.hi && g.k.hi <= kMaxGridAlphabet,
                 ErrorCode::kTooLarge, "grid K range must lie in [1, 14]");
  PSIOPT_ENFORCE(g.n2.lo >= 2 && g.n2.lo <= g.n2.hi && g.n2.hi <= kMaxGridN2,
                 ErrorCode::kTooLarge, "grid N2 range must lie in [2, 8]");
  PSIOPT_ENFORCE(g.t.lo >= 1 && g.t.lo <= g.t.hi && g.t.hi <= kMaxGridT,
                 ErrorCode::kTooLarge, "grid T range must lie in [1, 8]");
}

bool SizesAdmissible(const SweepGrid& g, std::size_t k, std::size_t a, std::size_t b) {
  if (k >= a + b) return false;
  if (g.p1_size && !g.p1_size->Contains(a)) return false;
  if (g.p2_size && !g.p2_size->Contains(b)) return false;
  return true;
}

// Visits every set pair of the grid in canonical order.
template <typename Fn>
void ForEachSetPair(const SweepGrid& g, Fn&& fn) {
  for (std::size_t k = g.k.lo; k <= g.k.hi; ++k) {
    const std::uint32_t full = (1u << k) - 1;
    for (std::uint32_t m1 = 1; m1 <= full; ++m1) {
      const auto a = static_cast<std::size_t>(std::popcount(m1));
      for (std::uint32_t m2 = 1; m2 <= full; ++m2) {
        const auto b = static_cast<std::size_t>(std::popcount(m2));
        if (SizesAdmissible(g, k, a, b)) fn(k, m1, m2, a, b);
      }
    }
  }
}

std::uint64_t ObjectiveCount(const SweepGrid& g, std::size_t t, std::size_t p1) {
  return std::min(SaturatingPow(t, p1, g.max_objectives), g.max_objectives);
}

std::vector<int> ObjectiveValues(const SweepGrid& g, const OptimizeRowSpec& spec) {
  std::vector<int> values(spec.k, 1);
  if (spec.random_objective) {
    RandomSource rng = RandomSource::Derive(DeriveSeed(g.seed, spec.objective), "objective");
    return RandomObjective(rng, Alphabet::Numbered(spec.k), static_cast<int>(spec.t)).values();
  }
  std::uint64_t code = spec.objective;
  for (std::size_t i = 0; i < spec.k; ++i) {
    if (spec.p1_mask & (1u << i)) {
      values[i] = static_cast<int>(code % spec.t) + 1;
      code /= spec.t;
    }
  }
  return values;
}

bool Selected(const SweepGrid& g, std::uint64_t index, std::uint64_t total) {
  return total <= g.cap || DeriveSeed(g.seed, index) % total < g.cap;
}

}  // namespace

SimConfig MakeSimConfig(const Scenario& s) {
  return SimConfig{.scenario = s, .record_queries = true, .rng_seed = s.seed};
}

SimReport RunOptimize(const SimConfig& cfg) {
  const Scenario& s = cfg.scenario;
  Session session(s, cfg.rng_seed);
  OptimizeResult r = Optimize(session);
  SimReport rep;
  rep.pstar = r.pstar;
  rep.skipped = r.skipped;
  rep.cost = MakeCostReport(r.transcript, s.p1(), s.n2);
  rep.cost.rank = r.rank;
  rep.cost.alpha = r.alpha;
  rep.cost.multiplicity = r.multiplicity;
  rep.prediction = PredictedCost(r.rank, r.alpha, r.multiplicity, s.n2, r.skipped);
  rep.match = r.transcript.total_download == rep.prediction.d;
  rep.oracle_match = r.pstar == BruteForceOptimum(s);
  if (!cfg.record_queries) r.transcript.messages.clear();
  rep.transcript = std::move(r.transcript);
  return rep;
}

SimReport RunNaive(const SimConfig& cfg) {
  const Scenario& s = cfg.scenario;
  Session session(s, cfg.rng_seed);
  NaiveResult r = NaivePsi(session);
  SimReport rep;
  rep.pstar = r.pstar;
  rep.cost = MakeCostReport(r.transcript, s.p1(), s.n2);
  rep.prediction = {DPsi(s.p1(), s.n2), CostBranch::kFindPsi};
  rep.match = r.transcript.total_download == rep.prediction.d;
  rep.oracle_match = r.pstar == BruteForceOptimum(s) &&
                     r.intersection == Intersect(s.set1.indices, s.set2.indices);
  if (!cfg.record_queries) r.transcript.messages.clear();
  rep.transcript = std::move(r.transcript);
  return rep;
}

ThPsiReport RunThPsi(const SimConfig& cfg, std::size_t threshold) {
  const Scenario& s = cfg.scenario;
  Session session(s, cfg.rng_seed);
  ThPsiResult r = ThPsi(session, threshold);
  ThPsiReport rep;
  rep.cardinality = r.cardinality;
  rep.intersection = r.intersection;
  rep.d = r.transcript.total_download;
  rep.d_pred = DThPsi(r.cardinality, threshold, s.p1(), s.n2);
  rep.match = rep.d == rep.d_pred;
  const IndexSet truth = Intersect(s.set1.indices, s.set2.indices);
  const bool expect_set = r.cardinality == s.p1() || r.cardinality >= threshold;
  rep.oracle_match = r.cardinality == truth.size() &&
                     r.intersection.has_value() == expect_set &&
                     (!r.intersection || *r.intersection == truth);
  if (!cfg.record_queries) r.transcript.messages.clear();
  rep.transcript = std::move(r.transcript);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

Range ParseRange(const std::string& v) {
  const auto colon = v.find(':');
  try {
    if (colon == std::string::npos) {
      const auto x = static_cast<std::size_t>(std::stoull(v));
      return {x, x};
    }
    return {static_cast<std::size_t>(std::stoull(v.substr(0, colon))),
            static_cast<std::size_t>(std::stoull(v.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "bad range '" + v + "'");
  }
}

}  // namespace

SweepGrid SweepGrid::Parse(const std::string& spec) {
  SweepGrid g;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    PSIOPT_ENFORCE(eq != std::string::npos, ErrorCode::kParse,
                   "grid entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "k") g.k = ParseRange(val);
    else if (key == "n2") g.n2 = ParseRange(val);
    else if (key == "t") g.t = ParseRange(val);
    else if (key == "p1") g.p1_size = ParseRange(val);
    else if (key == "p2") g.p2_size = ParseRange(val);
    else if (key == "cap") g.cap = ParseRange(val).lo;
    else if (key == "objectives") g.max_objectives = ParseRange(val).lo;
    else if (key == "seed") g.seed = ParseRange(val).lo;
    else if (key == "leak") g.leakage_cap = ParseRange(val).lo;
    else if (key == "leak_k") g.leakage_max_k = ParseRange(val).lo;
    else throw Error(ErrorCode::kParse, "unknown grid key '" + key + "'");
  }
  CheckGrid(g);
  return g;
}

std::uint64_t GridSize(const SweepGrid& g) {
  CheckGrid(g);
  std::uint64_t total = 0;
  const std::size_t n2_count = g.n2.hi - g.n2.lo + 1;
  for (std::size_t k = g.k.lo; k <= g.k.hi; ++k) {
    for (std::size_t a = 1; a <= k; ++a) {
      for (std::size_t b = 1; b <= k; ++b) {
        if (!SizesAdmissible(g, k, a, b)) continue;
        std::uint64_t objectives = 0;
        for (std::size_t t = g.t.lo; t <= g.t.hi; ++t) objectives += ObjectiveCount(g, t, a);
        total += Binomial(k, a) * Binomial(k, b) * objectives * n2_count;
      }
    }
  }
  return total;
}

std::vector<SweepRow> Sweep(const SweepGrid& g) {
  const std::uint64_t total = GridSize(g);
  PSIOPT_ENFORCE(total <= kMaxGridIterations, ErrorCode::kTooLarge,
                 "grid has " + std::to_string(total) + " rows; too large to enumerate");
  std::vector<OptimizeRowSpec> specs;
  std::uint64_t index = 0;
  ForEachSetPair(g, [&](std::size_t k, std::uint32_t m1, std::uint32_t m2, std::size_t a,
                        std::size_t) {
    for (std::size_t t = g.t.lo; t <= g.t.hi; ++t) {
      const bool random = SaturatingPow(t, a, g.max_objectives) > g.max_objectives;
      const std::uint64_t count = ObjectiveCount(g, t, a);
      for (std::uint64_t obj = 0; obj < count; ++obj) {
        for (std::size_t n2 = g.n2.lo; n2 <= g.n2.hi; ++n2, ++index) {
          if (!Selected(g, index, total)) continue;
          specs.push_back({k, m1, m2, t, random ? index : obj, random, n2, index});
        }
      }
    }
  });

  std::vector<SweepRow> rows(specs.size());
  ParallelFor(specs.size(), [&](std::size_t i) {
    const OptimizeRowSpec& sp = specs[i];
    const std::uint64_t seed = DeriveSeed(g.seed, sp.index);
    Scenario s = GridScenario(sp.k, sp.p1_mask, sp.p2_mask, ObjectiveValues(g, sp),
                              static_cast<int>(sp.t), sp.n2, seed);
    SimConfig cfg = MakeSimConfig(s);
    cfg.record_queries = false;
    const SimReport rep = RunOptimize(cfg);
    const RankPartition rp = MakeRankPartition(s.set1, s.objective);
    rows[i] = SweepRow{.k = sp.k,
                       .p1 = s.p1(),
                       .p2 = s.p2(),
                       .n2 = sp.n2,
                       .t = sp.t,
                       .seed = seed,
                       .rank = rep.cost.rank,
                       .alpha = rep.cost.alpha,
                       .multiplicity = rep.cost.multiplicity,
                       .d_sim = rep.cost.d,
                       .d_pred = rep.prediction.d,
                       .d_psi = rep.cost.d_psi,
                       .skipped = rep.skipped,
                       .levels = rp.levels(),
                       .oracle_match = rep.oracle_match};
  });
  return rows;
}

std::vector<ThPsiRow> SweepThPsi(const SweepGrid& g) {
  CheckGrid(g);
  struct Spec {
    std::size_t k;
    std::uint32_t m1, m2;
    std::size_t n2, threshold;
    std::uint64_t index;
  };
  std::uint64_t total = 0;
  const std::size_t n2_count = g.n2.hi - g.n2.lo + 1;
  for (std::size_t k = g.k.lo; k <= g.k.hi; ++k) {
    for (std::size_t a = 1; a <= k; ++a) {
      for (std::size_t b = 1; b <= k; ++b) {
        if (SizesAdmissible(g, k, a, b)) total += Binomial(k, a) * Binomial(k, b) * n2_count * a;
      }
    }
  }
  std::vector<Spec> specs;
  std::uint64_t index = 0;
  ForEachSetPair(g, [&](std::size_t k, std::uint32_t m1, std::uint32_t m2, std::size_t a,
                        std::size_t) {
    for (std::size_t n2 = g.n2.lo; n2 <= g.n2.hi; ++n2) {
      for (std::size_t th = 1; th <= a; ++th, ++index) {
        if (Selected(g, index, total)) specs.push_back({k, m1, m2, n2, th, index});
      }
    }
  });

  std::vector<ThPsiRow> rows(specs.size());
  ParallelFor(specs.size(), [&](std::size_t i) {
    const Spec& sp = specs[i];
    const std::uint64_t seed = DeriveSeed(g.seed, sp.index);
    Scenario s = GridScenario(sp.k, sp.m1, sp.m2, std::vector<int>(sp.k, 1), 1, sp.n2, seed);
    SimConfig cfg = MakeSimConfig(s);
    cfg.record_queries = false;
    const ThPsiReport rep = RunThPsi(cfg, sp.threshold);
    rows[i] = ThPsiRow{.k = sp.k,
                       .p1 = s.p1(),
                       .p2 = s.p2(),
                       .n2 = sp.n2,
                       .threshold = sp.threshold,
                       .seed = seed,
                       .cardinality = rep.cardinality,
                       .d_sim = rep.d,
                       .d_pred = rep.d_pred,
                       .oracle_match = rep.oracle_match};
  });
  return rows;
}

// ---------------------------------------------------------------------------

bool LeakageCheck::pass() const {
  return scheme_equals_nominal && naive_refines_scheme &&
         std::abs(bits_scheme - bits_nominal) <= 1e-9;
}

LeakageCheck CheckLeakage(const Scenario& s) {
  const LeakageReport rep = LeakagePartitions(s);
  LeakageCheck c;
  c.k = s.k();
  c.p1 = s.p1();
  c.p2 = s.p2();
  c.scheme_equals_nominal = SamePartition(rep.scheme, rep.nominal);
  c.naive_refines_scheme = Refines(rep.naive, rep.scheme);
  c.naive_strictly_finer = c.naive_refines_scheme && rep.naive.blocks.size() > rep.scheme.blocks.size();
  c.bits_scheme = MutualInformationBits(rep.scheme);
  c.bits_nominal = MutualInformationBits(rep.nominal);
  c.bits_naive = MutualInformationBits(rep.naive);
  return c;
}

std::vector<LeakageCheck> SweepLeakage(const SweepGrid& g) {
  CheckGrid(g);
  const std::size_t k_hi = std::min(g.k.hi, g.leakage_max_k);
  if (g.k.lo > k_hi || g.leakage_cap == 0) return {};

  RandomSource rng = RandomSource::Derive(g.seed, "leakage-fixtures");
  std::vector<Scenario> fixtures;
  std::size_t attempts = 0;
  while (fixtures.size() < g.leakage_cap && attempts++ < 100 * g.leakage_cap) {
    const std::size_t k = rng.UniformInt(g.k.lo, k_hi);
    const auto m1 = static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1));
    const auto a = static_cast<std::size_t>(std::popcount(m1));
    const std::size_t b = rng.UniformInt(1, k);
    const std::size_t t = rng.UniformInt(g.t.lo, g.t.hi);
    const std::size_t n2 = rng.UniformInt(g.n2.lo, g.n2.hi);
    if (!SizesAdmissible(g, k, a, b)) continue;
    // Any size-b set works as the starting P2; the partition spans all of them.
    const std::uint32_t m2 = (1u << b) - 1;
    const auto values = RandomObjective(rng, Alphabet::Numbered(k), static_cast<int>(t)).values();
    fixtures.push_back(GridScenario(k, m1, m2, values, static_cast<int>(t), n2,
                                    DeriveSeed(g.seed, fixtures.size())));
  }
  std::vector<LeakageCheck> out(fixtures.size());
  ParallelFor(fixtures.size(), [&](std::size_t i) { out[i] = CheckLeakage(fixtures[i]); });
  return out;
}

// ---------------------------------------------------------------------------

bool VerifySummary::AllPass() const {
  return cost_match == rows && bound_ok == rows && skip_ok == skip_rows &&
         oracle_ok == rows && thpsi_cost_match == thpsi_rows && leakage_pass == leakage_rows;
}

std::string VerifySummary::Format() const {
  auto pct = [](std::size_t num, std::size_t den) {
    if (den == 0) return std::string("100%");
    const double v = 100.0 * static_cast<double>(num) / static_cast<double>(den);
    std::ostringstream os;
    if (num == den) os << "100%";
    else os << std::fixed << std::setprecision(4) << v << "%";
    return os.str();
  };
  std::ostringstream os;
  os << "rows: " << rows << " thpsi_rows: " << thpsi_rows << " leakage_fixtures: " << leakage_rows
     << "\n";
  os << "theorem2: " << pct(cost_match, rows) << " theorem3: " << pct(thpsi_cost_match, thpsi_rows)
     << " leakage: " << pct(leakage_pass, leakage_rows) << "\n";
  os << "bound D<=D_psi: " << pct(bound_ok, rows) << " skip-rule: " << pct(skip_ok, skip_rows)
     << " (" << skip_rows << " rows) optimum-oracle: " << pct(oracle_ok, rows);
  return os.str();
}

VerifySummary Verify(const SweepGrid& g) {
  VerifySummary v;
  for (const SweepRow& r : Sweep(g)) {
    ++v.rows;
    v.cost_match += r.d_sim == r.d_pred;
    v.bound_ok += r.d_sim <= r.d_psi;
    v.oracle_ok += r.oracle_match;
    if (r.skipped) {
      ++v.skip_rows;
      v.skip_ok += r.d_sim == DPsi(r.levels - 1, r.n2);
    }
  }
  for (const ThPsiRow& r : SweepThPsi(g)) {
    ++v.thpsi_rows;
    v.thpsi_cost_match += r.d_sim == r.d_pred && r.oracle_match;
  }
  for (const LeakageCheck& c : SweepLeakage(g)) {
    ++v.leakage_rows;
    v.leakage_pass += c.pass();
  }
  return v;
}

std::vector<PeqRow> PeqTable(std::size_t p1, Range t, Range m) {
  PSIOPT_ENFORCE(t.lo >= 1 && t.lo <= t.hi && m.lo >= 1 && m.lo <= m.hi && m.hi <= p1,
                 ErrorCode::kInvalidArgument, "need T >= 1 and 1 <= M <= P1");
  std::vector<PeqRow> rows;
  for (std::size_t tt = t.lo; tt <= t.hi; ++tt) {
    for (std::size_t mm = m.lo; mm <= m.hi; ++mm) {
      rows.push_back(PeqRow{.t = tt,
                            .m = mm,
                            .closed = PeqClosedForm(p1, mm, tt).value,
                            .exhaustive = PeqExhaustive(PeqScenario(p1, mm), tt)});
    }
  }
  return rows;
}

}  // namespace psiopt
