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

#include <gtest/gtest.h>

#include <cmath>

#include "critrec/common/error.h"
#include "critrec/common/rng.h"
#include "critrec/critique/critique.h"
#include "critrec/critique/session.h"
#include "test_util.h"

namespace critrec {
namespace {

// Single linear layer head: logits = z W + b.
MlpHead LinearHead(int64_t d, int64_t k, const std::vector<double> &w,
                   const std::vector<double> &b) {
  ParamStore params;
  params.Add("h.0.w", Tensor({d, k}, std::vector<Real>(w.begin(), w.end())));
  params.Add("h.0.b", Tensor({k}, std::vector<Real>(b.begin(), b.end())));
  return MlpHead::FromParams(params, "h", 1, 0.2);
}

MlpHead RandomHead(int64_t d, int64_t k, Rng &rng) {
  ParamStore params;
  const std::vector<int64_t> dims = {d, 6, k};
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    Tensor w({dims[l], dims[l + 1]}), b({dims[l + 1]});
    for (int64_t i = 0; i < w.size(); ++i) w[i] = rng.Normal();
    for (int64_t i = 0; i < b.size(); ++i) b[i] = 0.1 * rng.Normal();
    params.Add("h." + std::to_string(l) + ".w", w);
    params.Add("h." + std::to_string(l) + ".b", b);
  }
  return MlpHead::FromParams(params, "h", 2, 0.2);
}

LatentState State(std::vector<double> z) {
  LatentState s;
  s.z = std::move(z);
  s.user_id = "u";
  s.item_id = "i";
  return s;
}

double Norm(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void ExpectSchedule(const CritiqueTrace &t, const CritiqueParams &p) {
  ASSERT_EQ(static_cast<int64_t>(t.step_norms.size()), t.iterations);
  ASSERT_EQ(static_cast<int64_t>(t.gaps.size()), t.iterations + 1);
  for (int64_t i = 0; i < t.iterations; ++i) {
    EXPECT_NEAR(t.step_norms[i], std::pow(p.decay, static_cast<double>(i)), 1e-6);
  }
  if (t.converged) EXPECT_LE(t.gaps.back(), p.threshold);
  EXPECT_LE(t.iterations, p.max_iters);
}

TEST(CritiqueParams, DefaultsAndAlternative) {
  CritiqueParams p;
  EXPECT_EQ(p.threshold, 0.015);
  EXPECT_EQ(p.decay, 0.9);
  EXPECT_EQ(p.max_iters, 50);
  EXPECT_EQ(CritiqueParams::Alternative().threshold, 0.01);
  EXPECT_EQ(CritiqueParams::Alternative().decay, 0.975);
  p.decay = 1.5;
  EXPECT_THROW(p.Validate(), Error);
}

TEST(CritiqueVector, EditsAndErrors) {
  const BitVector current = {1, 0, 1, 0};
  EXPECT_EQ(MakeCritiqueVector(current, {{0, EditAction::kRemove}, {1, EditAction::kAdd}}),
            (BitVector{0, 1, 1, 0}));
  EXPECT_EQ(MakeCritiqueVector(current, {}), current);
  auto code = [&](const std::vector<KeyphraseEdit> &edits) {
    try {
      MakeCritiqueVector(current, edits);
    } catch (const Error &e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code({{1, EditAction::kRemove}}), "redundant-edit");
  EXPECT_EQ(code({{0, EditAction::kAdd}}), "redundant-edit");
  EXPECT_EQ(code({{9, EditAction::kAdd}}), "invalid-edit");
  EXPECT_EQ(ImposeEdits({0, 0}, {{0, EditAction::kAdd}, {1, EditAction::kRemove}}),
            (BitVector{1, 0}));
  EXPECT_EQ(ParseEditAction("add"), EditAction::kAdd);
  EXPECT_THROW(ParseEditAction("toggle"), Error);
}

TEST(ApplyCritique, ConvergesOnSteepHead) {
  MlpHead head = LinearHead(2, 1, {10, 0}, {0});
  CritiqueParams p;
  auto [out, trace] = ApplyCritique(State({0, 0}), {1}, head, p);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.stop_reason, "converged");
  EXPECT_GT(trace.iterations, 0);
  ExpectSchedule(trace, p);
  EXPECT_GT(out.z[0], 0.0);
  EXPECT_DOUBLE_EQ(out.z[1], 0.0);
  EXPECT_TRUE(out.edited);
  // The latent moved exactly the sum of the step norms along one axis.
  double total = 0;
  for (double s : trace.step_norms) total += s;
  EXPECT_NEAR(out.z[0], total, 1e-9);
}

TEST(ApplyCritique, ZeroIterationsWhenAlreadyClose) {
  MlpHead head = LinearHead(2, 2, {1, -1, 0.5, 2}, {0, 0});
  CritiqueParams p;
  p.threshold = 1.0;
  const LatentState in = State({0.3, -0.2});
  auto [out, trace] = ApplyCritique(in, {1, 0}, head, p);
  EXPECT_EQ(trace.iterations, 0);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(out.z, in.z);
}

TEST(ApplyCritique, VanishedGradientStops) {
  MlpHead head = LinearHead(2, 1, {0, 0}, {0});
  auto [out, trace] = ApplyCritique(State({1, 1}), {1}, head, CritiqueParams{});
  EXPECT_EQ(trace.stop_reason, "vanished-gradient");
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(out.z, (std::vector<double>{1, 1}));
}

TEST(ApplyCritique, MaxItersCap) {
  MlpHead head = LinearHead(2, 2, {0.01, 0, 0, 0.01}, {0, 0});
  CritiqueParams p;
  p.max_iters = 7;
  auto [out, trace] = ApplyCritique(State({0, 0}), {1, 0}, head, p);
  EXPECT_EQ(trace.iterations, 7);
  EXPECT_EQ(trace.stop_reason, "max-iters");
  ExpectSchedule(trace, p);
}

TEST(ApplyCritique, ScheduleHoldsOnRandomHeads) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t d = 2 + static_cast<int64_t>(rng.Index(6));
    const int64_t k = 1 + static_cast<int64_t>(rng.Index(8));
    MlpHead head = RandomHead(d, k, rng);
    std::vector<double> z(d);
    for (double &v : z) v = rng.Normal();
    BitVector target(k);
    for (uint8_t &b : target) b = rng.Bernoulli(0.5);
    CritiqueParams p = trial % 2 ? CritiqueParams{} : CritiqueParams::Alternative();
    if (trial % 3 == 0) p.threshold = 0.3;
    auto [out, trace] = ApplyCritique(State(z), target, head, p);
    ExpectSchedule(trace, p);
    double total = 0;
    for (double s : trace.step_norms) total += s;
    EXPECT_LE(Norm(out.z, z), total + 1e-9);
    std::vector<double> probs = head.Probabilities(out.z);
    EXPECT_NEAR(CritiqueGap(probs, target), trace.gaps.back(), 1e-12);
  }
}

class SessionTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    testing::ToyPipeline p = testing::BuildToyPipeline();
    engine_ = new Engine(testing::BuildToyBundle(p, true));
  }
  static void TearDownTestSuite() { delete engine_; }
  static const Engine &engine() { return *engine_; }

  CritiqueSession Start() const {
    const auto &items = engine().bundle().items.ids();
    std::vector<std::string> candidates(items.begin(), items.begin() + 12);
    return StartSession(engine(), "s1", engine().bundle().users.Id(2), candidates, options_);
  }

  SessionOptions options_;

 private:
  static inline Engine *engine_ = nullptr;
};

TEST_F(SessionTest, StartRanksByRating) {
  CritiqueSession s = Start();
  ASSERT_EQ(s.ranking.size(), 12u);
  for (size_t r = 1; r < s.ranking.size(); ++r) {
    EXPECT_GE(s.explanations[s.ranking[r - 1]].rating, s.explanations[s.ranking[r]].rating);
  }
  EXPECT_TRUE(s.history.empty());
  EXPECT_FALSE(s.TopExplanation().justification.empty());
  EXPECT_THROW(StartSession(engine(), "x", "nobody", {s.candidates[0]}), Error);
}

TEST_F(SessionTest, EmptyEditsLeaveRankingUnchanged) {
  CritiqueSession s = Start();
  const auto ranking = s.ranking;
  RerankOutcome out = RerankAfterCritique(engine(), s, {}, CritiqueParams{}, options_);
  EXPECT_EQ(s.ranking, ranking);
  EXPECT_TRUE(s.history.empty());
  EXPECT_TRUE(out.traces.empty());
}

TEST_F(SessionTest, RemovingAChipClearsItsTargetBit) {
  CritiqueSession s = Start();
  const BitVector shown = s.TopExplanation().keyphrase_set;
  const int64_t k = std::find(shown.begin(), shown.end(), 1) - shown.begin();
  CritiqueParams p;
  RerankOutcome out =
      RerankAfterCritique(engine(), s, {{k, EditAction::kRemove}}, p, options_);
  EXPECT_EQ(out.critique_vector[k], 0);
  ASSERT_EQ(out.traces.size(), s.candidates.size());
  for (const CritiqueTrace &t : out.traces) ExpectSchedule(t, p);
  ASSERT_EQ(s.history.size(), 1u);
  EXPECT_EQ(s.history[0].action, "remove");
  EXPECT_EQ(s.history[0].keyphrase, k);
  EXPECT_EQ(s.rounds, 1);
  for (const LatentState &l : s.latents) EXPECT_TRUE(l.edited);
}

TEST_F(SessionTest, RedundantEditRejectedWithoutStateChange) {
  CritiqueSession s = Start();
  const BitVector shown = s.TopExplanation().keyphrase_set;
  const int64_t off = std::find(shown.begin(), shown.end(), 0) - shown.begin();
  const nlohmann::json before = SessionSnapshot(s);
  try {
    RerankAfterCritique(engine(), s, {{off, EditAction::kRemove}}, CritiqueParams{}, options_);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "redundant-edit");
  }
  EXPECT_EQ(SessionSnapshot(s), before);
}

TEST_F(SessionTest, ResetRestoresInitialStateAndReplaysIdentically) {
  CritiqueSession s = Start();
  const nlohmann::json initial = SessionSnapshot(s);
  auto critique_twice = [&](CritiqueSession &session) {
    std::vector<nlohmann::json> states;
    for (int round = 0; round < 2; ++round) {
      const BitVector shown = session.TopExplanation().keyphrase_set;
      const int64_t k = std::find(shown.begin(), shown.end(), 1) - shown.begin();
      RerankAfterCritique(engine(), session, {{k, EditAction::kRemove}}, CritiqueParams{},
                          options_);
      states.push_back(SessionSnapshot(session));
    }
    return states;
  };
  const auto first = critique_twice(s);
  EXPECT_EQ(s.history.size(), 2u);
  EXPECT_LT(s.history[0].timestamp, s.history[1].timestamp);
  ResetSession(engine(), s, options_);
  EXPECT_EQ(SessionSnapshot(s), initial);
  EXPECT_EQ(critique_twice(s), first);

  CritiqueSession fresh = Start();
  ResetSession(engine(), fresh, options_);
  EXPECT_EQ(SessionSnapshot(fresh), initial);
}

TEST_F(SessionTest, SnapshotRestoreReproducesExplanations) {
  CritiqueSession s = Start();
  const int64_t k = std::find(s.TopExplanation().keyphrase_set.begin(),
                              s.TopExplanation().keyphrase_set.end(), 1) -
                    s.TopExplanation().keyphrase_set.begin();
  RerankAfterCritique(engine(), s, {{k, EditAction::kRemove}}, CritiqueParams{}, options_);
  const nlohmann::json snap = SessionSnapshot(s);
  CritiqueSession restored = RestoreSession(engine(), nlohmann::json::parse(snap.dump()), options_);
  EXPECT_EQ(restored.ranking, s.ranking);
  EXPECT_EQ(restored.history.size(), s.history.size());
  for (size_t c = 0; c < s.candidates.size(); ++c) {
    EXPECT_EQ(restored.latents[c].z, s.latents[c].z);
    EXPECT_EQ(restored.explanations[c].keyphrase_probs, s.explanations[c].keyphrase_probs);
    EXPECT_EQ(restored.explanations[c].justification, s.explanations[c].justification);
  }
}

TEST_F(SessionTest, MultistepAddsMissingTargetKeyphrase) {
  CritiqueSession s = Start();
  const int64_t cand = s.ranking.back();
  BitVector target(engine().num_keyphrases(), 0);
  const BitVector &shown = s.explanations[cand].keyphrase_set;
  int64_t missing = -1;
  for (size_t k = 0; k < shown.size(); ++k) {
    if (!shown[k]) {
      missing = static_cast<int64_t>(k);
      break;
    }
  }
  ASSERT_GE(missing, 0);
  target[missing] = 1;
  Rng rng(3);
  StepOutcome step = MultistepStep(engine(), s, cand, target, rng, CritiqueParams{}, options_);
  EXPECT_FALSE(step.saturated);
  EXPECT_EQ(step.added_keyphrase, missing);
  EXPECT_EQ(s.history.size(), 1u);

  // A target already covered is saturated and changes nothing.
  BitVector covered = s.explanations[cand].keyphrase_set;
  const nlohmann::json before = SessionSnapshot(s);
  StepOutcome sat = MultistepStep(engine(), s, cand, covered, rng, CritiqueParams{}, options_);
  EXPECT_TRUE(sat.saturated);
  EXPECT_EQ(SessionSnapshot(s), before);
}

}  // namespace
}  // namespace critrec
