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

#include "psiopt/model.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace psiopt {

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  PSIOPT_ENFORCE(!labels_.empty(), ErrorCode::kInvalidArgument, "alphabet is empty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    PSIOPT_ENFORCE(seen.insert(l).second, ErrorCode::kInvalidArgument,
                   "duplicate alphabet label '" + l + "'");
  }
}

Alphabet Alphabet::Numbered(std::size_t k) {
  std::vector<std::string> labels;
  labels.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(labels));
}

const std::string& Alphabet::label(ItemIndex i) const {
  PSIOPT_ENFORCE(i >= 1 && i <= labels_.size(), ErrorCode::kOutOfRange,
                 "item index " + std::to_string(i) + " out of range");
  return labels_[i - 1];
}

ItemIndex Alphabet::IndexOf(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  PSIOPT_ENFORCE(it != labels_.end(), ErrorCode::kInvalidArgument,
                 "unknown label '" + label + "'");
  return static_cast<ItemIndex>(it - labels_.begin()) + 1;
}

std::size_t IncidenceVector::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

FieldVector IncidenceVector::ToField(Prime q) const {
  return FieldVector(q, std::vector<std::uint64_t>(bits_.begin(), bits_.end()));
}

Objective::Objective(std::vector<int> values, int value_count, Sense sense)
    : values_(std::move(values)), value_count_(value_count), sense_(sense) {
  PSIOPT_ENFORCE(value_count_ >= 1, ErrorCode::kInvalidArgument,
                 "objective value count must be >= 1");
  std::set<int> distinct(values_.begin(), values_.end());
  PSIOPT_ENFORCE(distinct.size() <= static_cast<std::size_t>(value_count_),
                 ErrorCode::kInvalidArgument,
                 "objective uses more distinct values than its value count");
}

const IndexSet& RankPartition::group(std::size_t r) const {
  PSIOPT_ENFORCE(r >= 1 && r <= groups.size(), ErrorCode::kOutOfRange,
                 "rank " + std::to_string(r) + " outside [1, " +
                     std::to_string(groups.size()) + "]");
  return groups[r - 1];
}

void Scenario::Validate() const {
  const std::size_t kk = k();
  PSIOPT_ENFORCE(!set1.indices.empty() && !set2.indices.empty(),
                 ErrorCode::kModelViolation, "feasible sets must be non-empty");
  for (const auto* s : {&set1, &set2}) {
    PSIOPT_ENFORCE(*s->indices.begin() >= 1 && *s->indices.rbegin() <= kk,
                   ErrorCode::kOutOfRange, "feasible set index outside [1..K]");
  }
  PSIOPT_ENFORCE(objective.values().size() == kk, ErrorCode::kInvalidArgument,
                 "objective must assign a value to every item");
  PSIOPT_ENFORCE(kk < p1() + p2(), ErrorCode::kModelViolation,
                 "need K < P1 + P2 to guarantee a non-empty intersection");
  PSIOPT_ENFORCE(n2 >= 2, ErrorCode::kInvalidArgument, "need at least two server databases");
  PSIOPT_ENFORCE(q.value() > p1(), ErrorCode::kInvalidArgument,
                 "modulus q=" + std::to_string(q.value()) + " must exceed P1=" +
                     std::to_string(p1()));
}

Prime DefaultModulus(std::size_t p1) { return Prime(NextPrimeAbove(p1)); }

IncidenceVector MakeIncidenceVector(const FeasibleSet& s, const Alphabet& a) {
  std::vector<std::uint8_t> bits(a.size(), 0);
  for (ItemIndex i : s.indices) {
    PSIOPT_ENFORCE(i >= 1 && i <= a.size(), ErrorCode::kOutOfRange,
                   "index " + std::to_string(i) + " outside alphabet of size " +
                       std::to_string(a.size()));
    bits[i - 1] = 1;
  }
  return IncidenceVector(std::move(bits));
}

RankPartition MakeRankPartition(const FeasibleSet& p1, const Objective& f) {
  // value -> indices; std::set keeps each group ascending.
  std::map<int, IndexSet> by_value;
  for (ItemIndex i : p1.indices) by_value[f.value(i)].insert(i);

  RankPartition rp;
  rp.alphabet_size = f.values().size();
  auto emit = [&](const auto& entry) {
    rp.groups.push_back(entry.second);
    rp.alphas.push_back(entry.second.size());
    rp.values.push_back(entry.first);
  };
  if (f.sense() == Sense::kMaximize) {
    for (auto it = by_value.rbegin(); it != by_value.rend(); ++it) emit(*it);
  } else {
    for (const auto& e : by_value) emit(e);
  }
  return rp;
}

FieldVector GroupIndicator(const RankPartition& rp, std::size_t r, Prime q) {
  FieldVector v(q, rp.alphabet_size);
  for (ItemIndex j : rp.group(r)) v.Set(j - 1, FieldElement(1, q));
  return v;
}

IndexSet Intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

IndexSet BruteForceOptimum(const Scenario& s) {
  const IndexSet common = Intersect(s.set1.indices, s.set2.indices);
  PSIOPT_ENFORCE(!common.empty(), ErrorCode::kModelViolation,
                 "feasible sets do not intersect");
  std::optional<int> best;
  for (ItemIndex i : common) {
    const int v = s.objective.value(i);
    if (!best || s.objective.Better(v, *best)) best = v;
  }
  IndexSet out;
  for (ItemIndex i : common) {
    if (s.objective.value(i) == *best) out.insert(i);
  }
  return out;
}

Objective RandomObjective(RandomSource& rng, const Alphabet& a, int value_count,
                          Sense sense) {
  PSIOPT_ENFORCE(value_count >= 1, ErrorCode::kInvalidArgument, "value count must be >= 1");
  std::vector<int> values(a.size());
  for (auto& v : values) {
    v = static_cast<int>(rng.UniformInt(1, static_cast<std::uint64_t>(value_count)));
  }
  return Objective(std::move(values), value_count, sense);
}

std::string FormatSet(const IndexSet& s, const Alphabet& a) {
  std::string out = "{";
  bool first = true;
  for (ItemIndex i : s) {
    if (!first) out += ",";
    out += a.label(i);
    first = false;
  }
  return out + "}";
}

}  // namespace psiopt
