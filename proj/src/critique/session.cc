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

#include "critrec/critique/session.h"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>

#include "critrec/common/error.h"
#include "critrec/eval/text_metrics.h"

namespace critrec {

namespace {

int64_t DisplaySize(const Engine &engine, const SessionOptions &options) {
  return options.display_keyphrases > 0 ? options.display_keyphrases
                                        : engine.hyper().display_keyphrases;
}

// Runs body(i) for i in [0, n) across threads, rethrowing the first error.
template <typename Body>
void ParallelFor(int64_t n, Body body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

CritiqueSession StartSession(const Engine &engine, std::string session_id, std::string user_id,
                             std::vector<std::string> candidates,
                             const SessionOptions &options) {
  if (candidates.empty()) throw Error("invalid-input", "a session needs candidates");
  std::set<std::string> unique(candidates.begin(), candidates.end());
  if (unique.size() != candidates.size()) {
    throw Error("invalid-input", "duplicate candidate items");
  }
  CritiqueSession s;
  s.session_id = std::move(session_id);
  s.user_id = std::move(user_id);
  s.candidates = std::move(candidates);
  for (const std::string &item : s.candidates) s.latents.push_back(engine.Encode(s.user_id, item));
  RefreshSession(engine, s, options);
  return s;
}

void RefreshSession(const Engine &engine, CritiqueSession &session,
                    const SessionOptions &options) {
  const int64_t n = static_cast<int64_t>(session.candidates.size());
  const int64_t m = DisplaySize(engine, options);
  session.explanations.assign(n, Explanation{});
  // Justifications are only generated for the displayed top item.
  ParallelFor(n, [&](int64_t c) {
    session.explanations[c] = engine.Explain(session.latents[c].z, m, false);
  });
  std::vector<int64_t> item_index(n);
  for (int64_t c = 0; c < n; ++c) item_index[c] = engine.bundle().items.Find(session.candidates[c]);
  session.ranking.resize(n);
  std::iota(session.ranking.begin(), session.ranking.end(), 0);
  std::stable_sort(session.ranking.begin(), session.ranking.end(), [&](int64_t a, int64_t b) {
    const double sa = session.explanations[a].rating, sb = session.explanations[b].rating;
    if (sa != sb) return sa > sb;
    return item_index[a] < item_index[b];
  });
  if (options.with_justification) {
    Explanation &top = session.explanations[session.top()];
    top.justification = engine.GenerateJustification(session.latents[session.top()].z,
                                                     engine.EncodeAspects(top.keyphrase_set),
                                                     options.decode);
  }
}

RerankOutcome RerankAfterCritique(const Engine &engine, CritiqueSession &session,
                                  const std::vector<KeyphraseEdit> &edits,
                                  const CritiqueParams &params, const SessionOptions &options,
                                  int64_t reference) {
  params.Validate();
  RerankOutcome out;
  const int64_t ref = reference < 0 ? session.top() : reference;
  out.critique_vector = MakeCritiqueVector(session.explanations.at(ref).keyphrase_set, edits);
  const int64_t n = static_cast<int64_t>(session.candidates.size());
  // Nothing to critique: the session, including its history, stays as is.
  if (edits.empty()) return out;
  out.traces.assign(n, CritiqueTrace{});
  std::vector<LatentState> next = session.latents;
  ParallelFor(n, [&](int64_t c) {
    const BitVector target = ImposeEdits(session.explanations[c].keyphrase_set, edits);
    std::tie(next[c], out.traces[c]) =
        ApplyCritique(session.latents[c], target, engine.keyphrase_head(), params);
  });
  session.latents = std::move(next);
  ++session.rounds;
  for (const KeyphraseEdit &e : edits) {
    session.history.push_back({std::string(EditActionName(e.action)), e.keyphrase,
                               session.next_timestamp++, session.rounds});
  }
  RefreshSession(engine, session, options);
  return out;
}

void ResetSession(const Engine &engine, CritiqueSession &session,
                  const SessionOptions &options) {
  for (size_t c = 0; c < session.candidates.size(); ++c) {
    session.latents[c] = engine.Encode(session.user_id, session.candidates[c]);
  }
  session.history.clear();
  session.next_timestamp = 0;
  session.rounds = 0;
  RefreshSession(engine, session, options);
}

StepOutcome EvaluateStep(const Engine &engine, const CritiqueSession &session,
                         int64_t candidate, const BitVector &target,
                         const SessionOptions &options, int64_t n) {
  StepOutcome out;
  std::set<int64_t> relevant;
  std::vector<std::string> phrases;
  for (size_t k = 0; k < target.size(); ++k) {
    if (!target[k]) continue;
    relevant.insert(static_cast<int64_t>(k));
    phrases.push_back(engine.bundle().keyphrases[k].phrase);
  }
  const Explanation &e = session.explanations.at(candidate);
  out.metrics = ComputeRankingMetrics(RankByScore(e.keyphrase_probs), relevant, n);
  if (options.with_justification) {
    TokenSeq just = e.justification;
    if (candidate != session.top() || just.empty()) {
      just = engine.GenerateJustification(session.latents[candidate].z,
                                          engine.EncodeAspects(e.keyphrase_set), options.decode);
    }
    out.r_kw = RKw(engine.DecodeTokens(just), phrases);
  }
  out.target_rank = std::find(session.ranking.begin(), session.ranking.end(), candidate) -
                    session.ranking.begin();
  return out;
}

StepOutcome MultistepStep(const Engine &engine, CritiqueSession &session, int64_t candidate,
                          const BitVector &target, Rng &rng, const CritiqueParams &params,
                          const SessionOptions &options, int64_t n) {
  const BitVector &shown = session.explanations.at(candidate).keyphrase_set;
  std::vector<int64_t> missing;
  for (size_t k = 0; k < target.size(); ++k) {
    if (target[k] && !shown[k]) missing.push_back(static_cast<int64_t>(k));
  }
  if (missing.empty()) {
    StepOutcome out = EvaluateStep(engine, session, candidate, target, options, n);
    out.saturated = true;
    return out;
  }
  const int64_t pick = missing[rng.Index(missing.size())];
  RerankAfterCritique(engine, session, {{pick, EditAction::kAdd}}, params, options, candidate);
  StepOutcome out = EvaluateStep(engine, session, candidate, target, options, n);
  out.added_keyphrase = pick;
  return out;
}

nlohmann::json SessionSnapshot(const CritiqueSession &session) {
  nlohmann::json history = nlohmann::json::array();
  for (const CritiqueRecord &r : session.history) {
    history.push_back({{"action", r.action}, {"keyphrase", r.keyphrase},
                       {"timestamp", r.timestamp}, {"round", r.round}});
  }
  return {{"session_id", session.session_id}, {"user_id", session.user_id},
          {"candidates", session.candidates}, {"latents", session.latents},
          {"history", history},               {"next_timestamp", session.next_timestamp},
          {"rounds", session.rounds}};
}

CritiqueSession RestoreSession(const Engine &engine, const nlohmann::json &snapshot,
                               const SessionOptions &options) {
  CritiqueSession s;
  snapshot.at("session_id").get_to(s.session_id);
  snapshot.at("user_id").get_to(s.user_id);
  snapshot.at("candidates").get_to(s.candidates);
  snapshot.at("latents").get_to(s.latents);
  snapshot.at("next_timestamp").get_to(s.next_timestamp);
  snapshot.at("rounds").get_to(s.rounds);
  for (const auto &r : snapshot.at("history")) {
    s.history.push_back({r.at("action").get<std::string>(), r.at("keyphrase").get<int64_t>(),
                         r.at("timestamp").get<int64_t>(), r.at("round").get<int64_t>()});
  }
  if (s.latents.size() != s.candidates.size() || s.candidates.empty()) {
    throw Error("bad-format", "session snapshot latents do not match candidates");
  }
  const int64_t dz = engine.hyper().d_z;
  for (const LatentState &l : s.latents) {
    if (static_cast<int64_t>(l.z.size()) != dz) {
      throw Error("bad-format", "session snapshot latent of wrong dimension");
    }
  }
  RefreshSession(engine, s, options);
  return s;
}

}  // namespace critrec
