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

#include "psiopt/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <thread>

#include "psiopt/protocol.hpp"

namespace psiopt {

std::size_t CeilDiv(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t DPsi(std::size_t p1, std::size_t n2) {
  PSIOPT_ENFORCE(n2 >= 2, ErrorCode::kInvalidArgument, "N2 must be >= 2");
  return CeilDiv(p1 * n2, n2 - 1);
}

CostPrediction PredictedCost(std::size_t rank, std::size_t alpha, std::size_t multiplicity,
                             std::size_t n2, bool skip) {
  PSIOPT_ENFORCE(n2 >= 2, ErrorCode::kInvalidArgument, "N2 must be >= 2");
  PSIOPT_ENFORCE(rank >= 1 && multiplicity >= 1 && multiplicity <= alpha,
                 ErrorCode::kInvalidArgument, "need R >= 1 and 1 <= M_R <= alpha_R");
  if (skip) return {DPsi(rank - 1, n2), CostBranch::kSkip};
  if (multiplicity < alpha) return {DPsi(rank + alpha - 1, n2), CostBranch::kFindPsi};
  return {DPsi(rank, n2), CostBranch::kCarPsiOnly};
}

std::size_t DThPsi(std::size_t m, std::size_t threshold, std::size_t p1, std::size_t n2) {
  PSIOPT_ENFORCE(p1 >= 1 && threshold >= 1 && m <= p1, ErrorCode::kInvalidArgument,
                 "need P1 >= 1, t >= 1 and M <= P1");
  if (m < threshold || m == p1) return 2;
  return DPsi(p1, n2);
}

// ---------------------------------------------------------------------------

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  PSIOPT_ENFORCE(den != 0, ErrorCode::kInvalidArgument, "zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::ToString() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::uint64_t Narrow(unsigned __int128 v) {
  PSIOPT_ENFORCE(v <= UINT64_MAX, ErrorCode::kTooLarge, "rational overflow");
  return static_cast<std::uint64_t>(v);
}

unsigned __int128 Gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const unsigned __int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
  const unsigned __int128 num = static_cast<unsigned __int128>(a.num_) * b.den_ +
                                static_cast<unsigned __int128>(b.num_) * a.den_;
  const unsigned __int128 den = static_cast<unsigned __int128>(a.den_) * b.den_;
  const unsigned __int128 g = Gcd128(num, den);
  return Rational(Narrow(num / g), Narrow(den / g));
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::uint64_t g1 = std::gcd(a.num_, b.den_);
  const std::uint64_t g2 = std::gcd(b.num_, a.den_);
  return Rational(Narrow(static_cast<unsigned __int128>(a.num_ / g1) * (b.num_ / g2)),
                  Narrow(static_cast<unsigned __int128>(a.den_ / g2) * (b.den_ / g1)));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
  const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::uint64_t Binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return out;
}

std::uint64_t IntPow(std::uint64_t base, std::size_t exp) {
  unsigned __int128 out = 1;
  for (std::size_t i = 0; i < exp; ++i) out = static_cast<unsigned __int128>(Narrow(out)) * base;
  return Narrow(out);
}

// ---------------------------------------------------------------------------

PeqResult PeqClosedForm(std::size_t p1, std::size_t m, std::size_t t) {
  PSIOPT_ENFORCE(p1 >= 1 && m >= 1 && m <= p1 && t >= 1, ErrorCode::kInvalidArgument,
                 "need 1 <= M <= P1 and T >= 1");
  const std::uint64_t space = IntPow(t, p1);
  PeqResult out;
  out.r_max = std::min(t, p1 - m + 1);
  for (std::size_t r = 1; r <= out.r_max; ++r) {
    std::uint64_t count = 0;
    if (r == 1) {
      // All of P1 shares one value.
      count = t;
    } else {
      // Ordered choice of the r-1 better singletons among the P1 - M items
      // outside P2, times increasing value chains ending at j with the common
      // value strictly worse than j.
      std::uint64_t chains = 0;
      for (std::size_t j = r - 1; j + 1 <= t; ++j) {
        chains += Binomial(static_cast<std::int64_t>(j) - 1, static_cast<std::int64_t>(r) - 2) *
                  (t - j);
      }
      std::uint64_t arrangements = Binomial(static_cast<std::int64_t>(p1 - m),
                                            static_cast<std::int64_t>(r) - 1);
      for (std::size_t i = 2; i < r; ++i) arrangements *= i;
      count = arrangements * chains;
    }
    const Rational term(count, space);
    out.terms.push_back(term);
    if (m < p1 - r + 1) out.value = out.value + term;
  }
  return out;
}

Scenario PeqScenario(std::size_t p1, std::size_t m, std::size_t n2) {
  PSIOPT_ENFORCE(p1 >= 1 && m >= 1 && m <= p1, ErrorCode::kInvalidArgument,
                 "need 1 <= M <= P1");
  FeasibleSet s1{.indices = {}, .owner = Entity::kE1};
  FeasibleSet s2{.indices = {}, .owner = Entity::kE2};
  for (std::size_t i = 1; i <= p1; ++i) s1.indices.insert(i);
  for (std::size_t i = 1; i <= m; ++i) s2.indices.insert(i);
  s2.indices.insert(p1 + 1);
  return Scenario{.alphabet = Alphabet::Numbered(p1 + 1),
                  .set1 = s1,
                  .set2 = s2,
                  .objective = Objective(std::vector<int>(p1 + 1, 1), 1, Sense::kMaximize),
                  .n2 = n2,
                  .n1 = 1,
                  .q = DefaultModulus(p1),
                  .seed = 0};
}

Rational PeqExhaustive(const Scenario& base, std::size_t t) {
  PSIOPT_ENFORCE(t >= 1, ErrorCode::kInvalidArgument, "T must be >= 1");
  const std::size_t p1 = base.p1();
  const std::uint64_t space = IntPow(t, p1);
  PSIOPT_ENFORCE(space <= kMaxEnumeration, ErrorCode::kTooLarge,
                 "T^P1 = " + std::to_string(space) + " exceeds enumeration limit");
  const std::vector<ItemIndex> items(base.set1.indices.begin(), base.set1.indices.end());
  const std::size_t naive = DPsi(p1, base.n2);

  auto count_range = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t hits = 0;
    Scenario s = base;
    std::vector<int> values(base.k(), 1);
    for (std::uint64_t code = lo; code < hi; ++code) {
      std::uint64_t c = code;
      for (ItemIndex i : items) {
        values[i - 1] = static_cast<int>(c % t) + 1;
        c /= t;
      }
      s.objective = Objective(values, static_cast<int>(t), base.objective.sense());
      if (Optimize(s).transcript.total_download == naive) ++hits;
    }
    return hits;
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (space < 4096 || workers == 1) return Rational(count_range(0, space), space);

  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = CeilDiv(space, workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = std::min<std::uint64_t>(space, w * chunk);
    const std::uint64_t hi = std::min<std::uint64_t>(space, lo + chunk);
    threads.emplace_back([&, w, lo, hi] { partial[w] = count_range(lo, hi); });
  }
  for (auto& th : threads) th.join();
  return Rational(std::accumulate(partial.begin(), partial.end(), std::uint64_t{0}), space);
}

// ---------------------------------------------------------------------------

std::size_t LeakagePartition::space_size() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

namespace {

template <typename Key>
LeakagePartition Group(const std::vector<IndexSet>& space, const std::vector<Key>& keys) {
  std::map<Key, std::vector<IndexSet>> by_key;
  for (std::size_t i = 0; i < space.size(); ++i) by_key[keys[i]].push_back(space[i]);
  LeakagePartition p;
  for (auto& [key, block] : by_key) p.blocks.push_back(std::move(block));
  return p;
}

void Subsets(std::size_t k, std::size_t size, std::size_t next, IndexSet& cur,
             std::vector<IndexSet>& out) {
  if (cur.size() == size) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = next; i <= k; ++i) {
    if (k - i + 1 < size - cur.size()) break;
    cur.insert(i);
    Subsets(k, size, i + 1, cur, out);
    cur.erase(i);
  }
}

std::vector<std::vector<IndexSet>> Canonical(const LeakagePartition& p) {
  auto blocks = p.blocks;
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

}  // namespace

LeakageReport LeakagePartitions(const Scenario& s) {
  s.Validate();
  PSIOPT_ENFORCE(s.k() <= kMaxLeakageAlphabet, ErrorCode::kTooLarge,
                 "leakage enumeration needs K <= " + std::to_string(kMaxLeakageAlphabet));
  std::vector<IndexSet> space;
  {
    std::vector<IndexSet> all;
    IndexSet cur;
    Subsets(s.k(), s.p2(), 1, cur, all);
    for (auto& c : all) {
      if (!Intersect(c, s.set1.indices).empty()) space.push_back(std::move(c));
    }
  }

  std::vector<ClientView> scheme_keys;
  std::vector<IndexSet> nominal_keys;
  std::vector<IndexSet> naive_keys;
  Scenario candidate = s;
  for (const IndexSet& p2 : space) {
    candidate.set2.indices = p2;
    const OptimizeResult opt = Optimize(candidate);
    scheme_keys.push_back(ExtractClientView(opt.transcript, opt.partition));
    nominal_keys.push_back(opt.pstar);
    naive_keys.push_back(NaivePsi(candidate).intersection);
  }
  return LeakageReport{.scheme = Group(space, scheme_keys),
                       .nominal = Group(space, nominal_keys),
                       .naive = Group(space, naive_keys)};
}

double MutualInformationBits(const LeakagePartition& p) {
  const double total = static_cast<double>(p.space_size());
  double h = 0.0;
  for (const auto& b : p.blocks) {
    if (b.empty()) continue;
    const double pr = static_cast<double>(b.size()) / total;
    h -= pr * std::log2(pr);
  }
  return h == 0.0 ? 0.0 : h;
}

bool SamePartition(const LeakagePartition& a, const LeakagePartition& b) {
  return Canonical(a) == Canonical(b);
}

bool Refines(const LeakagePartition& fine, const LeakagePartition& coarse) {
  std::map<IndexSet, std::size_t> block_of;
  for (std::size_t i = 0; i < coarse.blocks.size(); ++i) {
    for (const auto& e : coarse.blocks[i]) block_of[e] = i;
  }
  for (const auto& b : fine.blocks) {
    std::optional<std::size_t> owner;
    for (const auto& e : b) {
      auto it = block_of.find(e);
      if (it == block_of.end()) return false;
      if (owner && *owner != it->second) return false;
      owner = it->second;
    }
  }
  return true;
}

}  // namespace psiopt
