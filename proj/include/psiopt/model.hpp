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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psiopt/field.hpp"

namespace psiopt {

// Item positions are 1-based throughout, matching the alphabet order.
using ItemIndex = std::size_t;
using IndexSet = std::set<ItemIndex>;

/// Ordered set of K distinct item labels.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels);
  // Labels "1".."k", for synthetic scenarios.
  static Alphabet Numbered(std::size_t k);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(ItemIndex i) const;
  ItemIndex IndexOf(const std::string& label) const;
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

enum class Entity { kE1, kE2 };

struct FeasibleSet {
  IndexSet indices;
  Entity owner = Entity::kE1;

  std::size_t size() const { return indices.size(); }
};

/// K-length 0/1 vector marking membership in a feasible set.
class IncidenceVector {
 public:
  explicit IncidenceVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::size_t size() const { return bits_.size(); }
  std::uint8_t bit(ItemIndex i) const { return bits_.at(i - 1); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t popcount() const;
  FieldVector ToField(Prime q) const;

  friend bool operator==(const IncidenceVector&, const IncidenceVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Sense { kMinimize, kMaximize };

/// Objective f over the whole alphabet; values lie in [1..value_count].
class Objective {
 public:
  Objective(std::vector<int> values, int value_count, Sense sense);

  int value(ItemIndex i) const { return values_.at(i - 1); }
  int value_count() const { return value_count_; }
  Sense sense() const { return sense_; }
  const std::vector<int>& values() const { return values_; }

  // True when value a is strictly better than b under the sense.
  bool Better(int a, int b) const {
    return sense_ == Sense::kMaximize ? a > b : a < b;
  }

 private:
  std::vector<int> values_;
  int value_count_;
  Sense sense_;
};

/// Groups J_1..J_L of P1's indices ordered best to worst.
struct RankPartition {
  std::vector<IndexSet> groups;
  std::vector<std::size_t> alphas;
  std::vector<int> values;
  std::size_t alphabet_size = 0;

  std::size_t levels() const { return groups.size(); }
  // 1-based rank access.
  const IndexSet& group(std::size_t r) const;
  std::size_t alpha(std::size_t r) const { return alphas.at(r - 1); }
};

struct Scenario {
  Alphabet alphabet;
  FeasibleSet set1;
  FeasibleSet set2;
  Objective objective;
  std::size_t n2 = 2;
  std::size_t n1 = 1;  // recorded, not used by the protocol
  Prime q;
  std::uint64_t seed = 0;

  std::size_t k() const { return alphabet.size(); }
  std::size_t p1() const { return set1.size(); }
  std::size_t p2() const { return set2.size(); }

  // Throws Error(kModelViolation / kInvalidArgument) on any broken invariant.
  void Validate() const;
};

// Smallest prime above P1, the modulus used when a scenario leaves q unset.
Prime DefaultModulus(std::size_t p1);

IncidenceVector MakeIncidenceVector(const FeasibleSet& s, const Alphabet& a);
RankPartition MakeRankPartition(const FeasibleSet& p1, const Objective& f);
FieldVector GroupIndicator(const RankPartition& rp, std::size_t r, Prime q);
IndexSet BruteForceOptimum(const Scenario& s);
Objective RandomObjective(RandomSource& rng, const Alphabet& a, int value_count,
                          Sense sense = Sense::kMaximize);

IndexSet Intersect(const IndexSet& a, const IndexSet& b);
std::string FormatSet(const IndexSet& s, const Alphabet& a);

}  // namespace psiopt
