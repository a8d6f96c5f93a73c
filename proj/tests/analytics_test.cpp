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

#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "psiopt/analytics.hpp"

using namespace psiopt;
using psiopt::testing::Movies;
using psiopt::testing::OracleOptimum;
using psiopt::testing::OracleIntersection;

namespace {

// Entropy in bits of a labelling of equally likely outcomes.
template <typename Key>
double EntropyOf(const std::map<Key, std::size_t>& counts) {
  std::size_t n = 0;
  for (const auto& [k, c] : counts) n += c;
  double h = 0;
  for (const auto& [k, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

TEST_CASE("d_psi") {
  CHECK(DPsi(5, 2) == 10);
  CHECK(DPsi(5, 3) == 8);
  CHECK(DPsi(1, 2) == 2);
  CHECK(DPsi(4, 2) == 8);
  CHECK(DPsi(4, 5) == 5);
  CHECK(DPsi(0, 3) == 0);
  CHECK(CeilDiv(9, 2) == 5);
  CHECK(CeilDiv(8, 2) == 4);
}

TEST_CASE("predicted_cost") {
  CHECK(PredictedCost(1, 3, 2, 2, false).d == 6);
  CHECK(PredictedCost(1, 3, 2, 3, false).d == 5);
  CHECK(PredictedCost(1, 3, 2, 4, false).d == 4);
  CHECK(PredictedCost(1, 3, 2, 2, false).branch == CostBranch::kFindPsi);
  CHECK(PredictedCost(1, 1, 1, 2, false).d == 2);
  CHECK(PredictedCost(2, 3, 3, 2, false).d == 4);
  CHECK(PredictedCost(2, 3, 3, 3, false).d == 3);
  CHECK(PredictedCost(2, 3, 3, 3, false).branch == CostBranch::kCarPsiOnly);
  CHECK(PredictedCost(3, 1, 1, 2, true).d == 4);
  CHECK(PredictedCost(3, 1, 1, 2, true).branch == CostBranch::kSkip);
  CHECK(PredictedCost(1, 1, 1, 2, true).d == 0);

  // Never above naive PSI for any stop point with R + alpha - 1 <= P1.
  for (std::size_t p1 = 1; p1 <= 10; ++p1) {
    for (std::size_t n2 = 2; n2 <= 6; ++n2) {
      for (std::size_t r = 1; r <= p1; ++r) {
        for (std::size_t a = 1; r + a - 1 <= p1; ++a) {
          for (std::size_t m = 1; m <= a; ++m) {
            CHECK(PredictedCost(r, a, m, n2, false).d <= DPsi(p1, n2));
          }
        }
      }
    }
  }
}

TEST_CASE("d_thpsi") {
  CHECK(DThPsi(3, 5, 4, 2) == 2);
  CHECK(DThPsi(3, 4, 4, 2) == 2);
  CHECK(DThPsi(3, 2, 4, 2) == 8);
  CHECK(DThPsi(3, 3, 4, 3) == 6);
  CHECK(DThPsi(4, 1, 4, 3) == 2);
  CHECK(DThPsi(4, 9, 4, 3) == 2);
  CHECK(DThPsi(1, 1, 4, 2) == 8);
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(0, 7) == Rational());
  CHECK(Rational(27, 243).ToString() == "1/9");
  CHECK(Rational(1, 4).ToDouble() == doctest::Approx(0.25));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK(Binomial(5, 2) == 10);
  CHECK(Binomial(3, 5) == 0);
  CHECK(Binomial(4, -1) == 0);
  CHECK(Binomial(0, 0) == 1);
  CHECK(IntPow(3, 5) == 243);
}

TEST_CASE("p_eq spot values") {
  CHECK(PeqClosedForm(5, 4, 2).value == Rational(1, 16));
  CHECK(PeqClosedForm(5, 1, 2).value == Rational(3, 16));
  CHECK(PeqClosedForm(5, 1, 3).value == Rational(27, 243));
  CHECK(PeqClosedForm(5, 1, 3).value == Rational(1, 9));
}

TEST_CASE("p_eq with one objective value") {
  // Everything sits in one group: R = 1, alpha = P1, cost equals naive iff M < P1.
  for (std::size_t p1 = 2; p1 <= 6; ++p1) {
    for (std::size_t m = 1; m < p1; ++m) {
      CHECK(PeqClosedForm(p1, m, 1).value == Rational(1, 1));
    }
  }
}

TEST_CASE("p_eq closed form against two independent enumerations") {
  for (std::size_t p1 = 2; p1 <= 6; ++p1) {
    for (std::size_t t = 1; t <= 6; ++t) {
      if (IntPow(t, p1) > 50'000) continue;
      for (std::size_t m = 1; m <= p1; ++m) {
        CAPTURE(p1);
        CAPTURE(t);
        CAPTURE(m);
        const PeqResult closed = PeqClosedForm(p1, m, t);
        const auto [hits, space] = psiopt::testing::OraclePeqEvent(p1, m, t);
        CHECK(closed.value == Rational(hits, space));
        CHECK(closed.value == PeqExhaustive(PeqScenario(p1, m), t));
        CHECK(closed.r_max == std::min(t, p1 - m + 1));
      }
    }
  }
}

TEST_CASE("p_eq is independent of N2") {
  for (std::size_t n2 = 2; n2 <= 4; ++n2) {
    CHECK(PeqExhaustive(PeqScenario(4, 2, n2), 3) == PeqClosedForm(4, 2, 3).value);
  }
}

TEST_CASE("p_eq decreases as more of P1 is shared") {
  for (std::size_t t = 2; t <= 8; ++t) {
    for (std::size_t m = 1; m < 5; ++m) {
      CHECK(PeqClosedForm(5, m + 1, t).value <= PeqClosedForm(5, m, t).value);
    }
    CHECK(PeqClosedForm(5, 5, t).value == Rational());
  }
}

TEST_CASE("p_eq enumeration guard") {
  CHECK_THROWS_AS((void)PeqExhaustive(PeqScenario(12, 2), 8), Error);
}

TEST_CASE("leakage partitions on the movie scenario") {
  const Scenario s = Movies();
  const LeakageReport rep = LeakagePartitions(s);
  CHECK(rep.scheme.space_size() == 56);  // C(8,5); every such set meets P1
  CHECK(SamePartition(rep.scheme, rep.nominal));
  CHECK(Refines(rep.naive, rep.scheme));
  CHECK_FALSE(Refines(rep.scheme, rep.naive));

  // Independent bits: label each admissible P2 by P* and by P1 ∩ P2.
  std::map<IndexSet, std::size_t> by_pstar, by_intersection;
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) != 5) continue;
    const IndexSet p2 = psiopt::testing::MaskSet(mask);
    by_pstar[OracleOptimum(s.objective.values(), s.set1.indices, p2, true)]++;
    by_intersection[OracleIntersection(s.set1.indices, p2)]++;
  }
  CHECK(MutualInformationBits(rep.nominal) == doctest::Approx(EntropyOf(by_pstar)));
  CHECK(MutualInformationBits(rep.scheme) == doctest::Approx(EntropyOf(by_pstar)));
  CHECK(MutualInformationBits(rep.naive) == doctest::Approx(EntropyOf(by_intersection)));
  CHECK(MutualInformationBits(rep.scheme) < MutualInformationBits(rep.naive));
}

TEST_CASE("mutual information of trivial partitions") {
  LeakagePartition one;
  one.blocks.push_back({IndexSet{1}, IndexSet{2}, IndexSet{3}, IndexSet{4}});
  CHECK(MutualInformationBits(one) == doctest::Approx(0.0));

  LeakagePartition singles;
  for (std::size_t i = 1; i <= 8; ++i) singles.blocks.push_back({IndexSet{i}});
  CHECK(MutualInformationBits(singles) == doctest::Approx(3.0));
  CHECK(Refines(singles, singles));
  CHECK(SamePartition(singles, singles));
}

TEST_CASE("leakage on random small instances") {
  RandomSource rng(123);
  int checked = 0;
  while (checked < 40) {
    const std::size_t k = rng.UniformInt(3, 7);
    const IndexSet p1 = psiopt::testing::MaskSet(
        static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1)));
    const IndexSet p2 = psiopt::testing::MaskSet(
        static_cast<std::uint32_t>(rng.UniformInt(1, (1u << k) - 1)));
    if (k >= p1.size() + p2.size()) continue;
    const int t = static_cast<int>(rng.UniformInt(1, 4));
    const Objective f = RandomObjective(rng, Alphabet::Numbered(k), t);
    const Scenario s = psiopt::testing::MakeScenario(k, p1, p2, f.values(), t,
                                                     rng.UniformInt(2, 4), checked);
    const LeakageReport rep = LeakagePartitions(s);
    CHECK(SamePartition(rep.scheme, rep.nominal));
    CHECK(Refines(rep.naive, rep.scheme));
    ++checked;
  }
}
