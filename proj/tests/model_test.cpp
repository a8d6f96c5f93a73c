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

#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "psiopt/model.hpp"

using namespace psiopt;
using psiopt::testing::Labels;
using psiopt::testing::MakeScenario;
using psiopt::testing::MaskSet;
using psiopt::testing::Movies;
using psiopt::testing::MoviesMap2;
using psiopt::testing::MoviesMap3;

TEST_CASE("incidence vectors of the movie sets") {
  const Scenario s = Movies();
  CHECK(MakeIncidenceVector(s.set1, s.alphabet).bits() ==
        std::vector<std::uint8_t>{1, 0, 1, 1, 0, 0, 1, 0});
  CHECK(MakeIncidenceVector(s.set2, s.alphabet).bits() ==
        std::vector<std::uint8_t>{0, 1, 1, 1, 0, 0, 1, 1});

  FeasibleSet full{.indices = {}, .owner = Entity::kE1};
  for (ItemIndex i = 1; i <= 8; ++i) full.indices.insert(i);
  const IncidenceVector all = MakeIncidenceVector(full, s.alphabet);
  CHECK(all.popcount() == 8);

  FeasibleSet bad{.indices = {9}, .owner = Entity::kE2};
  CHECK_THROWS_AS(MakeIncidenceVector(bad, s.alphabet), Error);
}

TEST_CASE("rank partitions of the movie mappings") {
  const Scenario base = Movies();
  const RankPartition rp = MakeRankPartition(base.set1, base.objective);
  REQUIRE(rp.levels() == 2);
  CHECK(rp.group(1) == Labels(base, {"A", "C", "G"}));
  CHECK(rp.group(2) == Labels(base, {"D"}));
  CHECK(rp.alphas == std::vector<std::size_t>{3, 1});
  CHECK(rp.values == std::vector<int>{4, 3});

  const Scenario m2 = MoviesMap2();
  const RankPartition rp2 = MakeRankPartition(m2.set1, m2.objective);
  CHECK(rp2.alphas == std::vector<std::size_t>{1, 3});
  CHECK(rp2.group(1) == Labels(m2, {"A"}));
  CHECK(rp2.group(2) == Labels(m2, {"C", "D", "G"}));

  const Scenario flat = MakeScenario(5, {1, 2, 3}, {3, 4, 5}, {2, 2, 2, 1, 1}, 2, 2);
  const RankPartition rp3 = MakeRankPartition(flat.set1, flat.objective);
  CHECK(rp3.levels() == 1);
  CHECK(rp3.alphas == std::vector<std::size_t>{3});
}

TEST_CASE("minimization ranks low values first") {
  const Scenario s =
      MakeScenario(5, {1, 2, 3, 4}, {2, 3, 5}, {3, 1, 2, 1, 9}, 9, 2, 7, Sense::kMinimize);
  const RankPartition rp = MakeRankPartition(s.set1, s.objective);
  CHECK(rp.values == std::vector<int>{1, 2, 3});
  CHECK(rp.group(1) == IndexSet{2, 4});
  CHECK(BruteForceOptimum(s) == IndexSet{2});
}

TEST_CASE("group_indicator") {
  const Scenario s = Movies();
  const RankPartition rp = MakeRankPartition(s.set1, s.objective);
  const FieldVector x1 = GroupIndicator(rp, 1, s.q);
  CHECK(std::vector<std::uint64_t>(x1.values().begin(), x1.values().end()) ==
        std::vector<std::uint64_t>{1, 0, 1, 0, 0, 0, 1, 0});
  CHECK(GroupIndicator(rp, 2, s.q) == FieldVector::Basis(s.q, 8, 3));
  CHECK_THROWS_AS(GroupIndicator(rp, 3, s.q), Error);
  CHECK_THROWS_AS(GroupIndicator(rp, 0, s.q), Error);
}

TEST_CASE("rank partition invariants over random scenarios") {
  RandomSource rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = rng.UniformInt(2, 10);
    const auto m1 = static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1));
    const auto m2 = static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1));
    const int t = static_cast<int>(rng.UniformInt(1, 5));
    const IndexSet p1 = MaskSet(m1);
    const IndexSet p2 = MaskSet(m2);
    const Objective f = RandomObjective(rng, Alphabet::Numbered(k), t);
    const Prime q = DefaultModulus(p1.size());
    const RankPartition rp = MakeRankPartition({.indices = p1, .owner = Entity::kE1}, f);

    CHECK(std::accumulate(rp.alphas.begin(), rp.alphas.end(), std::size_t{0}) == p1.size());
    IndexSet covered;
    FieldVector sum(q, k);
    for (std::size_t r = 1; r <= rp.levels(); ++r) {
      CHECK(rp.alpha(r) >= 1);
      CHECK(rp.alpha(r) == rp.group(r).size());
      if (r > 1) CHECK(rp.values[r - 2] > rp.values[r - 1]);
      for (auto j : rp.group(r)) CHECK(covered.insert(j).second);
      const FieldVector xr = GroupIndicator(rp, r, q);
      for (std::size_t r2 = r + 1; r2 <= rp.levels(); ++r2) {
        CHECK(Dot(xr, GroupIndicator(rp, r2, q)).value() == 0);
      }
      // <X_J, X2> = |J ∩ I2|.
      const FieldVector x2 =
          MakeIncidenceVector({.indices = p2, .owner = Entity::kE2}, Alphabet::Numbered(k)).ToField(q);
      CHECK(Dot(xr, x2).value() ==
            psiopt::testing::OracleIntersection(rp.group(r), p2).size());
      sum = sum + xr;
    }
    CHECK(covered == p1);
    CHECK(sum ==
          MakeIncidenceVector({.indices = p1, .owner = Entity::kE1}, Alphabet::Numbered(k)).ToField(q));
  }
}

TEST_CASE("brute_force_optimum") {
  CHECK(BruteForceOptimum(Movies()) == Labels(Movies(), {"C", "G"}));
  CHECK(BruteForceOptimum(MoviesMap2()) == Labels(Movies(), {"C", "D", "G"}));
  CHECK(BruteForceOptimum(MoviesMap3()) == Labels(Movies(), {"G"}));

  Scenario disjoint = Movies();
  disjoint.set2.indices = Labels(disjoint, {"B", "E"});
  CHECK_THROWS_AS(BruteForceOptimum(disjoint), Error);

  RandomSource rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = rng.UniformInt(1, 9);
    const IndexSet p1 = MaskSet(static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1)));
    const IndexSet p2 = MaskSet(static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1)));
    if (psiopt::testing::OracleIntersection(p1, p2).empty()) continue;
    const bool maximize = rng.UniformInt(0, 1) == 1;
    const Objective f = RandomObjective(rng, Alphabet::Numbered(k), 4,
                                        maximize ? Sense::kMaximize : Sense::kMinimize);
    Scenario s{.alphabet = Alphabet::Numbered(k),
               .set1 = {.indices = p1, .owner = Entity::kE1},
               .set2 = {.indices = p2, .owner = Entity::kE2},
               .objective = f,
               .n2 = 2,
               .n1 = 1,
               .q = DefaultModulus(p1.size()),
               .seed = 0};
    const IndexSet opt = BruteForceOptimum(s);
    CHECK(opt == psiopt::testing::OracleOptimum(f.values(), p1, p2, maximize));
    CHECK(std::includes(p1.begin(), p1.end(), opt.begin(), opt.end()));
    CHECK(std::includes(p2.begin(), p2.end(), opt.begin(), opt.end()));
  }
}

TEST_CASE("random_objective") {
  const Alphabet a = Alphabet::Numbered(6);
  RandomSource r1(3);
  const Objective constant = RandomObjective(r1, a, 1);
  for (int v : constant.values()) CHECK(v == 1);
  const RankPartition rp =
      MakeRankPartition({.indices = {1, 2, 3}, .owner = Entity::kE1}, constant);
  CHECK(rp.levels() == 1);

  RandomSource r2(77), r3(77);
  CHECK(RandomObjective(r2, a, 4).values() == RandomObjective(r3, a, 4).values());

  RandomSource rng(123);
  constexpr int kRuns = 20000;
  std::vector<int> ones(6, 0);
  for (int i = 0; i < kRuns; ++i) {
    const Objective f = RandomObjective(rng, a, 2);
    for (std::size_t j = 0; j < 6; ++j) ones[j] += f.values()[j] == 1;
  }
  for (int c : ones) CHECK(std::abs(static_cast<double>(c) / kRuns - 0.5) < 0.02);

  CHECK_THROWS_AS(RandomObjective(rng, a, 0), Error);
}

TEST_CASE("scenario validation") {
  Scenario s = Movies();
  CHECK_NOTHROW(s.Validate());
  s.n2 = 1;
  CHECK_THROWS_AS(s.Validate(), Error);

  Scenario small = MakeScenario(4, {1, 2}, {3, 4}, {1, 1, 1, 1}, 1, 2);
  try {
    small.Validate();
    FAIL("expected model violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kModelViolation);
  }

  Scenario bad_q = Movies();
  bad_q.q = Prime(3);  // P1 = 4
  CHECK_THROWS_AS(bad_q.Validate(), Error);

  CHECK_THROWS_AS(Alphabet({"A", "A"}), Error);
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), Error);
  CHECK(DefaultModulus(4).value() == 5);
}
