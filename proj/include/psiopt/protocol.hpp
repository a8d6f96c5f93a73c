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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psiopt/field.hpp"
#include "psiopt/model.hpp"

namespace psiopt {

enum class Phase { kCarPsi, kFindPsi, kThPsiCar, kThPsiFind, kPsi };

std::string_view PhaseName(Phase p);

// ---------------------------------------------------------------------------
// Server side
// ---------------------------------------------------------------------------

/// Symbols S_1..S_m shared by the server databases before the protocol starts.
struct CommonRandomness {
  std::vector<FieldElement> symbols;

  // m = ceil(P1 / (N2 - 1)).
  static std::size_t RequiredCount(std::size_t p1, std::size_t n2);
  static CommonRandomness Sample(RandomSource& rng, Prime q, std::size_t count);
};

/// State replicated on every server database.
struct ServerState {
  FieldVector x2;
  CommonRandomness randomness;
  std::size_t n2;
};

/// A = <query, x2> + S_k. Rounds are 1-based.
FieldElement DatabaseAnswer(const FieldVector& query, const ServerState& state,
                            std::size_t round, std::size_t db);

/// One non-colluding database. It sees only the queries addressed to it and
/// keeps no state between them.
class Database {
 public:
  Database(std::size_t id, std::shared_ptr<const ServerState> state)
      : id_(id), state_(std::move(state)) {}

  std::size_t id() const { return id_; }
  FieldElement Answer(const FieldVector& query, std::size_t round) const {
    return DatabaseAnswer(query, *state_, round, id_);
  }

 private:
  std::size_t id_;
  std::shared_ptr<const ServerState> state_;
};

class Server {
 public:
  explicit Server(ServerState state);

  std::size_t size() const { return databases_.size(); }
  // Database ids are 1-based.
  const Database& database(std::size_t id) const { return databases_.at(id - 1); }
  std::size_t randomness_supply() const { return state_->randomness.symbols.size(); }
  // For verification harnesses only; the client never reads this.
  const ServerState& state() const { return *state_; }

 private:
  std::shared_ptr<const ServerState> state_;
  std::vector<Database> databases_;
};

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

struct Message {
  Phase phase;
  std::size_t round;
  std::size_t db;
  FieldVector query;
  FieldElement answer;
  bool reference = false;
  std::size_t downloaded = 1;
};

/// Client-side round bookkeeping: the mask h_k and which databases it reached.
/// The randomness symbol used by round k is S_k.
struct Round {
  std::size_t k;
  FieldVector mask;
  std::vector<std::size_t> used_dbs;
  std::optional<FieldElement> reference_answer;
};

struct Transcript {
  std::vector<Message> messages;
  std::vector<Round> rounds;
  std::size_t total_download = 0;

  std::size_t DownloadsIn(Phase p) const;
};

// ---------------------------------------------------------------------------
// Client side
// ---------------------------------------------------------------------------

/// Serves payload requests v -> <v, x2> one at a time. A round is one fresh
/// mask h_k and symbol S_k, one reference query (h_k) and up to N2 - 1 payload
/// queries (h_k + v), each to a distinct database. X payloads cost
/// ceil(X * N2 / (N2 - 1)) downloads.
class RoundScheduler {
 public:
  RoundScheduler(const Server& server, RandomSource& client_rng, Prime q,
                 std::size_t alphabet_size, Transcript& transcript);

  FieldElement RequestPayload(const FieldVector& payload, Phase phase);

  std::size_t rounds_used() const { return transcript_.rounds.size(); }
  Prime modulus() const { return q_; }
  std::size_t alphabet_size() const { return k_; }

 private:
  void OpenRound(Phase phase);
  FieldElement Send(std::size_t db, const FieldVector& query, Phase phase, bool reference);

  const Server& server_;
  RandomSource& rng_;
  Prime q_;
  std::size_t k_;
  Transcript& transcript_;
};

std::size_t CarPsi(RoundScheduler& sched, const FieldVector& indicator,
                   std::size_t group_size, Phase phase = Phase::kCarPsi);
std::size_t CarPsi(RoundScheduler& sched, const RankPartition& rp, std::size_t r);

/// Membership of every index in group, given |group ∩ I2| = cardinality.
/// Probes all but the largest index and infers the held-out bit.
IndexSet FindPsi(RoundScheduler& sched, const IndexSet& group, std::size_t cardinality,
                 Phase phase = Phase::kFindPsi);
IndexSet FindPsi(RoundScheduler& sched, const RankPartition& rp, std::size_t r,
                 std::size_t cardinality);

// ---------------------------------------------------------------------------
// Protocol runs
// ---------------------------------------------------------------------------

/// Client and server set up from one scenario. Client masks and server
/// randomness come from independent streams derived from the seed.
class Session {
 public:
  Session(const Scenario& s, std::uint64_t seed);
  explicit Session(const Scenario& s) : Session(s, s.seed) {}

  const Scenario& scenario() const { return scenario_; }
  const Server& server() const { return server_; }
  RandomSource& client_rng() { return client_rng_; }

 private:
  Scenario scenario_;
  RandomSource client_rng_;
  Server server_;
};

struct OptimizeResult {
  IndexSet pstar;
  Transcript transcript;
  RankPartition partition;
  std::size_t rank = 0;         // R
  std::size_t alpha = 0;        // alpha_R
  std::size_t multiplicity = 0; // M_R
  bool skipped = false;         // J_L accepted without a query
};

OptimizeResult Optimize(const Scenario& s);
OptimizeResult Optimize(Session& session);

struct ThPsiResult {
  std::size_t cardinality = 0;
  std::optional<IndexSet> intersection;
  Transcript transcript;
};

ThPsiResult ThPsi(const Scenario& s, std::size_t threshold);
ThPsiResult ThPsi(Session& session, std::size_t threshold);

struct NaiveResult {
  IndexSet intersection;
  IndexSet pstar;
  Transcript transcript;
};

NaiveResult NaivePsi(const Scenario& s);
NaiveResult NaivePsi(Session& session);

// ---------------------------------------------------------------------------
// Client view
// ---------------------------------------------------------------------------

/// A payload value decoded by the client: <payload, x2> = answer - reference.
struct DecodedPayload {
  Phase phase;
  std::size_t round;
  FieldVector payload;
  FieldElement value;
};

std::vector<DecodedPayload> DecodePayloads(const Transcript& t);

/// What the client knows about X2 after an optimize run: the rank R at which
/// it stopped and X2 on every index of J_1..J_R.
struct ClientView {
  std::size_t rank = 0;
  std::map<ItemIndex, std::uint8_t> known_bits;

  friend auto operator<=>(const ClientView&, const ClientView&) = default;
};

/// Rebuilds the client's knowledge from the transcript alone.
ClientView ExtractClientView(const Transcript& t, const RankPartition& rp);

}  // namespace psiopt
