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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "psiopt/model.hpp"

namespace psiopt {

// ---------------------------------------------------------------------------
// Download cost formulas
// ---------------------------------------------------------------------------

std::size_t CeilDiv(std::size_t a, std::size_t b);

/// Cost of retrieving P1 membership bits with PSI: ceil(P1 * N2 / (N2 - 1)).
std::size_t DPsi(std::size_t p1, std::size_t n2);

enum class CostBranch { kFindPsi, kCarPsiOnly, kSkip };

struct CostPrediction {
  std::size_t d = 0;
  CostBranch branch = CostBranch::kCarPsiOnly;
};

/// Download cost of the sequential scheme stopping at rank R.
/// skip: R = L, alpha_L = 1 and the last group was never queried.
CostPrediction PredictedCost(std::size_t rank, std::size_t alpha, std::size_t multiplicity,
                             std::size_t n2, bool skip);

std::size_t DThPsi(std::size_t m, std::size_t threshold, std::size_t p1, std::size_t n2);

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

/// Non-negative reduced fraction.
class Rational {
 public:
  Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string ToString() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

std::uint64_t Binomial(std::int64_t n, std::int64_t k);
std::uint64_t IntPow(std::uint64_t base, std::size_t exp);

// ---------------------------------------------------------------------------
// Probability that the scheme costs as much as naive PSI
// ---------------------------------------------------------------------------

struct PeqResult {
  Rational value;
  // terms[r-1] = P_eq(r) before the indicator 1{M < P1 - r + 1} is applied.
  std::vector<Rational> terms;
  std::size_t r_max = 0;
};

PeqResult PeqClosedForm(std::size_t p1, std::size_t m, std::size_t t);

/// Enumerates all t^P1 objective assignments on P1 (items outside P1 get
/// value 1) and counts those where the simulated cost equals DPsi.
/// The objective of base is ignored.
Rational PeqExhaustive(const Scenario& base, std::size_t t);

/// Canonical sets: P1 = {1..p1}, P2 = {1..m} ∪ {p1+1}, K = p1 + 1.
Scenario PeqScenario(std::size_t p1, std::size_t m, std::size_t n2 = 2);

inline constexpr std::uint64_t kMaxEnumeration = 10'000'000;

// ---------------------------------------------------------------------------
// Leakage accounting
// ---------------------------------------------------------------------------

/// Partition of the admissible P2 space into blocks of indistinguishable sets.
struct LeakagePartition {
  std::vector<std::vector<IndexSet>> blocks;

  std::size_t space_size() const;
};

struct LeakageReport {
  LeakagePartition scheme;   // client knowledge decoded from the transcript
  LeakagePartition nominal;  // P* alone
  LeakagePartition naive;    // P1 ∩ P2
};

inline constexpr std::size_t kMaxLeakageAlphabet = 14;

/// All size-|P2| subsets of [1..K] meeting P1, each run through the scheme and
/// the naive baseline with the scenario's P1, f, N2 and seed.
LeakageReport LeakagePartitions(const Scenario& s);

/// I(P2; view) = H(view) under a uniform prior over the partitioned space.
double MutualInformationBits(const LeakagePartition& p);

bool SamePartition(const LeakagePartition& a, const LeakagePartition& b);
// True when every block of fine lies inside one block of coarse.
bool Refines(const LeakagePartition& fine, const LeakagePartition& coarse);

}  // namespace psiopt
