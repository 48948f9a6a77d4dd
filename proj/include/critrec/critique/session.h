// Copyright 2026 The critrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRITREC_CRITIQUE_SESSION_H_
#define CRITREC_CRITIQUE_SESSION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "critrec/common/rng.h"
#include "critrec/critique/critique.h"
#include "critrec/eval/ranking_metrics.h"
#include "critrec/model/engine.h"
#include "json.hpp"

namespace critrec {

struct CritiqueRecord {
  std::string action;  // "add" or "remove"
  int64_t keyphrase = 0;
  int64_t timestamp = 0;  // logical clock, one tick per record
  int64_t round = 0;      // rerank round the record belongs to
};

struct SessionOptions {
  bool with_justification = true;
  int64_t display_keyphrases = 0;  // 0 = the model's default
  DecodeOptions decode;
};

struct CritiqueSession {
  std::string session_id;
  std::string user_id;
  std::vector<std::string> candidates;
  std::vector<LatentState> latents;        // parallel to candidates
  std::vector<Explanation> explanations;  // parallel to candidates
  std::vector<int64_t> ranking;           // candidate positions, best first
  std::vector<CritiqueRecord> history;
  int64_t next_timestamp = 0;
  int64_t rounds = 0;

  int64_t top() const { return ranking.at(0); }
  const Explanation &TopExplanation() const { return explanations.at(top()); }
};

// Encodes every candidate and ranks them. Throws Error("unknown-entity").
CritiqueSession StartSession(const Engine &engine, std::string session_id, std::string user_id,
                             std::vector<std::string> candidates,
                             const SessionOptions &options = {});

// Recomputes explanations and the ranking from the current latents. Ties
// go to the lower item index.
void RefreshSession(const Engine &engine, CritiqueSession &session,
                    const SessionOptions &options = {});

struct RerankOutcome {
  BitVector critique_vector;
  std::vector<CritiqueTrace> traces;  // parallel to candidates
};

// Validates the edits against the keyphrase set of candidate `reference`
// (the displayed top item when negative), then moves each candidate's latent
// toward its own keyphrase set with the edits imposed. An empty edit list
// leaves the session untouched.
RerankOutcome RerankAfterCritique(const Engine &engine, CritiqueSession &session,
                                  const std::vector<KeyphraseEdit> &edits,
                                  const CritiqueParams &params,
                                  const SessionOptions &options = {}, int64_t reference = -1);

// Restores the state StartSession produced: original latents, empty history.
// Callers that need the old history archive it first.
void ResetSession(const Engine &engine, CritiqueSession &session,
                  const SessionOptions &options = {});

struct StepOutcome {
  bool saturated = false;
  int64_t added_keyphrase = -1;
  RankingMetrics metrics;  // candidate's keyphrase ranking vs the target set
  double r_kw = 0.0;       // candidate's justification vs the target set
  int64_t target_rank = 0;  // 0-based position of the candidate in the ranking
};

// Keyphrase metrics of `candidate`'s current explanation against `target`.
// The justification is regenerated from its predicted set when requested.
StepOutcome EvaluateStep(const Engine &engine, const CritiqueSession &session,
                         int64_t candidate, const BitVector &target,
                         const SessionOptions &options = {}, int64_t n = 10);

// Adds one target keyphrase missing from `candidate`'s predicted set, chosen
// uniformly with `rng`, reranks and evaluates. Flags "saturated" and leaves
// the session unchanged when nothing is missing.
StepOutcome MultistepStep(const Engine &engine, CritiqueSession &session, int64_t candidate,
                          const BitVector &target, Rng &rng, const CritiqueParams &params,
                          const SessionOptions &options = {}, int64_t n = 10);

nlohmann::json SessionSnapshot(const CritiqueSession &session);
// Rebuilds a session from a snapshot; explanations are recomputed.
CritiqueSession RestoreSession(const Engine &engine, const nlohmann::json &snapshot,
                               const SessionOptions &options = {});

}  // namespace critrec

#endif  // CRITREC_CRITIQUE_SESSION_H_
