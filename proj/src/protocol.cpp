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

#include "psiopt/protocol.hpp"

#include <algorithm>

namespace psiopt {

std::string_view PhaseName(Phase p) {
  switch (p) {
    case Phase::kCarPsi: return "carpsi";
    case Phase::kFindPsi: return "findpsi";
    case Phase::kThPsiCar: return "thpsi-car";
    case Phase::kThPsiFind: return "thpsi-find";
    case Phase::kPsi: return "psi";
  }
  return "unknown";
}

std::size_t CommonRandomness::RequiredCount(std::size_t p1, std::size_t n2) {
  PSIOPT_ENFORCE(n2 >= 2, ErrorCode::kInvalidArgument, "need at least two databases");
  return (p1 + n2 - 2) / (n2 - 1);
}

CommonRandomness CommonRandomness::Sample(RandomSource& rng, Prime q, std::size_t count) {
  CommonRandomness cr;
  cr.symbols.reserve(count);
  for (std::size_t i = 0; i < count; ++i) cr.symbols.push_back(rng.UniformElement(q));
  return cr;
}

FieldElement DatabaseAnswer(const FieldVector& query, const ServerState& state,
                            std::size_t round, std::size_t db) {
  PSIOPT_ENFORCE(db >= 1 && db <= state.n2, ErrorCode::kOutOfRange,
                 "database id " + std::to_string(db) + " out of range");
  PSIOPT_ENFORCE(round >= 1 && round <= state.randomness.symbols.size(),
                 ErrorCode::kRandomnessExhausted,
                 "round " + std::to_string(round) + " exceeds randomness supply of " +
                     std::to_string(state.randomness.symbols.size()));
  return Dot(query, state.x2) + state.randomness.symbols[round - 1];
}

Server::Server(ServerState state)
    : state_(std::make_shared<const ServerState>(std::move(state))) {
  databases_.reserve(state_->n2);
  for (std::size_t id = 1; id <= state_->n2; ++id) databases_.emplace_back(id, state_);
}

std::size_t Transcript::DownloadsIn(Phase p) const {
  std::size_t n = 0;
  for (const auto& m : messages) {
    if (m.phase == p) n += m.downloaded;
  }
  return n;
}

RoundScheduler::RoundScheduler(const Server& server, RandomSource& client_rng, Prime q,
                               std::size_t alphabet_size, Transcript& transcript)
    : server_(server), rng_(client_rng), q_(q), k_(alphabet_size), transcript_(transcript) {}

FieldElement RoundScheduler::Send(std::size_t db, const FieldVector& query, Phase phase,
                                  bool reference) {
  Round& round = transcript_.rounds.back();
  const FieldElement answer = server_.database(db).Answer(query, round.k);
  round.used_dbs.push_back(db);
  transcript_.messages.push_back(Message{.phase = phase,
                                         .round = round.k,
                                         .db = db,
                                         .query = query,
                                         .answer = answer,
                                         .reference = reference});
  transcript_.total_download += 1;
  return answer;
}

void RoundScheduler::OpenRound(Phase phase) {
  const std::size_t k = transcript_.rounds.size() + 1;
  PSIOPT_ENFORCE(k <= server_.randomness_supply(), ErrorCode::kRandomnessExhausted,
                 "randomness exhausted: round " + std::to_string(k) + " but only " +
                     std::to_string(server_.randomness_supply()) + " symbols shared");
  transcript_.rounds.push_back(Round{.k = k,
                                     .mask = SampleUniformVector(rng_, q_, k_),
                                     .used_dbs = {},
                                     .reference_answer = std::nullopt});
  Round& round = transcript_.rounds.back();
  // Reference query goes to the lowest-id database.
  const FieldVector mask = round.mask;
  const FieldElement ref = Send(1, mask, phase, true);
  transcript_.rounds.back().reference_answer = ref;
}

FieldElement RoundScheduler::RequestPayload(const FieldVector& payload, Phase phase) {
  PSIOPT_ENFORCE(payload.size() == k_, ErrorCode::kLengthMismatch,
                 "payload length " + std::to_string(payload.size()) + " != K=" +
                     std::to_string(k_));
  if (transcript_.rounds.empty() || transcript_.rounds.back().used_dbs.size() == server_.size()) {
    OpenRound(phase);
  }
  const Round& round = transcript_.rounds.back();
  const std::size_t db = round.used_dbs.size() + 1;
  const FieldVector query = round.mask + payload;
  const FieldElement reference = *round.reference_answer;
  return Send(db, query, phase, false) - reference;
}

std::size_t CarPsi(RoundScheduler& sched, const FieldVector& indicator,
                   std::size_t group_size, Phase phase) {
  const FieldElement m = sched.RequestPayload(indicator, phase);
  PSIOPT_ENFORCE(m.value() <= group_size, ErrorCode::kProtocolCorruption,
                 "decoded cardinality " + std::to_string(m.value()) + " exceeds group size " +
                     std::to_string(group_size));
  return static_cast<std::size_t>(m.value());
}

std::size_t CarPsi(RoundScheduler& sched, const RankPartition& rp, std::size_t r) {
  return CarPsi(sched, GroupIndicator(rp, r, sched.modulus()), rp.alpha(r), Phase::kCarPsi);
}

IndexSet FindPsi(RoundScheduler& sched, const IndexSet& group, std::size_t cardinality,
                 Phase phase) {
  PSIOPT_ENFORCE(cardinality >= 1 && cardinality + 1 <= group.size(),
                 ErrorCode::kInvalidArgument,
                 "FindPSI needs 1 <= M_r <= alpha_r - 1 (M_r=" + std::to_string(cardinality) +
                     ", alpha_r=" + std::to_string(group.size()) + ")");
  const ItemIndex held_out = *group.rbegin();
  IndexSet found;
  std::size_t ones = 0;
  for (ItemIndex j : group) {
    if (j == held_out) continue;
    const FieldElement bit =
        sched.RequestPayload(FieldVector::Basis(sched.modulus(), sched.alphabet_size(), j - 1), phase);
    PSIOPT_ENFORCE(bit.value() <= 1, ErrorCode::kProtocolCorruption,
                   "decoded membership bit " + std::to_string(bit.value()) + " for index " +
                       std::to_string(j));
    if (bit.value() == 1) {
      found.insert(j);
      ++ones;
    }
  }
  PSIOPT_ENFORCE(ones <= cardinality && cardinality - ones <= 1,
                 ErrorCode::kProtocolCorruption,
                 "held-out bit inferred outside {0,1}");
  if (cardinality - ones == 1) found.insert(held_out);
  return found;
}

IndexSet FindPsi(RoundScheduler& sched, const RankPartition& rp, std::size_t r,
                 std::size_t cardinality) {
  return FindPsi(sched, rp.group(r), cardinality, Phase::kFindPsi);
}

namespace {

ServerState MakeServerState(const Scenario& s, std::uint64_t seed) {
  RandomSource server_rng = RandomSource::Derive(seed, "server-common-randomness");
  return ServerState{
      .x2 = MakeIncidenceVector(s.set2, s.alphabet).ToField(s.q),
      .randomness = CommonRandomness::Sample(
          server_rng, s.q, CommonRandomness::RequiredCount(s.p1(), s.n2)),
      .n2 = s.n2};
}

}  // namespace

Session::Session(const Scenario& s, std::uint64_t seed)
    : scenario_((s.Validate(), s)),
      client_rng_(RandomSource::Derive(seed, "client-masks")),
      server_(MakeServerState(scenario_, seed)) {}

OptimizeResult Optimize(const Scenario& s) {
  Session session(s);
  return Optimize(session);
}

OptimizeResult Optimize(Session& session) {
  const Scenario& s = session.scenario();
  OptimizeResult out;
  out.partition = MakeRankPartition(s.set1, s.objective);
  const RankPartition& rp = out.partition;
  RoundScheduler sched(session.server(), session.client_rng(), s.q, s.k(), out.transcript);

  const std::size_t levels = rp.levels();
  for (std::size_t r = 1; r <= levels; ++r) {
    const std::size_t alpha = rp.alpha(r);
    if (r == levels && alpha == 1) {
      // Every better group missed, and the intersection is non-empty.
      out.pstar = rp.group(r);
      out.rank = r;
      out.alpha = 1;
      out.multiplicity = 1;
      out.skipped = true;
      return out;
    }
    const std::size_t m = CarPsi(sched, rp, r);
    if (m == 0) continue;
    out.rank = r;
    out.alpha = alpha;
    out.multiplicity = m;
    out.pstar = m == alpha ? rp.group(r) : FindPsi(sched, rp, r, m);
    return out;
  }
  throw Error(ErrorCode::kModelViolation,
              "every CarPSI round returned 0: P1 and P2 do not intersect");
}

ThPsiResult ThPsi(const Scenario& s, std::size_t threshold) {
  Session session(s);
  return ThPsi(session, threshold);
}

ThPsiResult ThPsi(Session& session, std::size_t threshold) {
  PSIOPT_ENFORCE(threshold >= 1, ErrorCode::kInvalidArgument, "threshold must be >= 1");
  const Scenario& s = session.scenario();
  ThPsiResult out;
  RoundScheduler sched(session.server(), session.client_rng(), s.q, s.k(), out.transcript);
  const FieldVector x1 = MakeIncidenceVector(s.set1, s.alphabet).ToField(s.q);
  out.cardinality = CarPsi(sched, x1, s.p1(), Phase::kThPsiCar);
  if (out.cardinality == s.p1()) {
    // P1 ⊆ P2 is already implied by the cardinality.
    out.intersection = s.set1.indices;
  } else if (out.cardinality >= threshold) {
    out.intersection = FindPsi(sched, s.set1.indices, out.cardinality, Phase::kThPsiFind);
  }
  return out;
}

NaiveResult NaivePsi(const Scenario& s) {
  Session session(s);
  return NaivePsi(session);
}

NaiveResult NaivePsi(Session& session) {
  const Scenario& s = session.scenario();
  NaiveResult out;
  RoundScheduler sched(session.server(), session.client_rng(), s.q, s.k(), out.transcript);
  for (ItemIndex j : s.set1.indices) {
    const FieldElement bit =
        sched.RequestPayload(FieldVector::Basis(s.q, s.k(), j - 1), Phase::kPsi);
    PSIOPT_ENFORCE(bit.value() <= 1, ErrorCode::kProtocolCorruption,
                   "decoded membership bit outside {0,1}");
    if (bit.value() == 1) out.intersection.insert(j);
  }
  PSIOPT_ENFORCE(!out.intersection.empty(), ErrorCode::kModelViolation,
                 "P1 and P2 do not intersect");
  std::optional<int> best;
  for (ItemIndex j : out.intersection) {
    const int v = s.objective.value(j);
    if (!best || s.objective.Better(v, *best)) best = v;
  }
  for (ItemIndex j : out.intersection) {
    if (s.objective.value(j) == *best) out.pstar.insert(j);
  }
  return out;
}

std::vector<DecodedPayload> DecodePayloads(const Transcript& t) {
  std::vector<DecodedPayload> out;
  for (const Message& m : t.messages) {
    if (m.reference) continue;
    const Round& round = t.rounds.at(m.round - 1);
    PSIOPT_ENFORCE(round.reference_answer.has_value(), ErrorCode::kProtocolCorruption,
                   "round " + std::to_string(m.round) + " has no reference answer");
    out.push_back(DecodedPayload{.phase = m.phase,
                                 .round = m.round,
                                 .payload = m.query - round.mask,
                                 .value = m.answer - *round.reference_answer});
  }
  return out;
}

ClientView ExtractClientView(const Transcript& t, const RankPartition& rp) {
  const std::size_t levels = rp.levels();
  if (levels == 0) return {};
  const Prime q = t.rounds.empty() ? DefaultModulus(rp.alphabet_size)
                                   : t.rounds.front().mask.modulus();

  std::map<std::size_t, std::size_t> cardinalities;  // r -> M_r
  std::map<ItemIndex, std::uint8_t> probed;
  for (const DecodedPayload& d : DecodePayloads(t)) {
    bool matched = false;
    for (std::size_t r = 1; r <= levels && !matched; ++r) {
      if (d.payload == GroupIndicator(rp, r, q)) {
        cardinalities[r] = static_cast<std::size_t>(d.value.value());
        matched = true;
      }
    }
    if (matched) continue;
    const auto vals = d.payload.values();
    const auto ones = std::count(vals.begin(), vals.end(), 1u);
    const auto zeros = std::count(vals.begin(), vals.end(), 0u);
    PSIOPT_ENFORCE(ones == 1 && ones + zeros == static_cast<long>(vals.size()),
                   ErrorCode::kProtocolCorruption, "payload is neither a group indicator nor e_j");
    const auto pos = static_cast<ItemIndex>(std::find(vals.begin(), vals.end(), 1u) - vals.begin());
    probed[pos + 1] = static_cast<std::uint8_t>(d.value.value());
  }

  ClientView view;
  for (const auto& [r, m] : cardinalities) {
    const IndexSet& group = rp.group(r);
    view.rank = std::max(view.rank, r);
    if (m == 0 || m == group.size()) {
      for (ItemIndex j : group) view.known_bits[j] = m == 0 ? 0 : 1;
      continue;
    }
    std::size_t ones = 0;
    std::optional<ItemIndex> missing;
    for (ItemIndex j : group) {
      if (auto it = probed.find(j); it != probed.end()) {
        view.known_bits[j] = it->second;
        ones += it->second;
      } else {
        missing = j;
      }
    }
    if (missing) view.known_bits[*missing] = static_cast<std::uint8_t>(m - ones);
  }

  // Skip rule: J_1..J_{L-1} all missed and J_L is a singleton.
  const bool all_missed = std::all_of(cardinalities.begin(), cardinalities.end(),
                                      [](const auto& e) { return e.second == 0; });
  if (all_missed && cardinalities.size() + 1 == levels && rp.alpha(levels) == 1) {
    view.rank = levels;
    view.known_bits[*rp.group(levels).begin()] = 1;
  }
  return view;
}

}  // namespace psiopt
