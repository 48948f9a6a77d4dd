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

#include "critrec/eval/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "critrec/common/error.h"
#include "critrec/critique/session.h"

namespace critrec {

MeanStd Summarize(const std::vector<double> &values) {
  MeanStd m;
  m.n = static_cast<int64_t>(values.size());
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / m.n;
  if (m.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(sq / (m.n - 1));
    m.ci95 = 1.96 * m.stddev / std::sqrt(static_cast<double>(m.n));
  }
  return m;
}

void to_json(nlohmann::json &j, const MeanStd &m) {
  j = nlohmann::json{{"mean", m.mean}, {"stddev", m.stddev}, {"ci95", m.ci95}, {"n", m.n}};
}

namespace {

std::set<int64_t> Bits(const BitVector &v) {
  std::set<int64_t> out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k]) out.insert(static_cast<int64_t>(k));
  }
  return out;
}

std::vector<std::string> Phrases(const Engine &engine, const BitVector &v) {
  std::vector<std::string> out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k]) out.push_back(engine.bundle().keyphrases[k].phrase);
  }
  return out;
}

void AddInto(RankingMetrics &acc, const RankingMetrics &m) {
  acc.ndcg += m.ndcg;
  acc.map += m.map;
  acc.precision += m.precision;
  acc.recall += m.recall;
}

void DivideBy(RankingMetrics &acc, int64_t n) {
  if (n == 0) return;
  acc.ndcg /= n;
  acc.map /= n;
  acc.precision /= n;
  acc.recall /= n;
}

std::vector<std::string> SampleUsers(const Engine &engine, int64_t n, Rng &rng) {
  const auto &ids = engine.bundle().users.ids();
  std::vector<std::string> out;
  for (int64_t i = 0; i < n; ++i) out.push_back(ids[rng.Index(ids.size())]);
  return out;
}

}  // namespace

std::vector<double> KeyphrasePopularity(const ModelData &data, int64_t k) {
  std::vector<double> pop(k, 0.0);
  for (const Example &e : data.examples) {
    if (e.split != Split::kTrain) continue;
    for (int64_t c = 0; c < k; ++c) pop[c] += e.keyphrases[c];
  }
  return pop;
}

nlohmann::json ToJson(const ModelEvalReport &r) {
  return {{"examples", r.examples},
          {"mae", r.mae},
          {"rmse", r.rmse},
          {"global_mean_mae", r.global_mean_mae},
          {"cutoffs", r.cutoffs},
          {"keyphrase", r.keyphrase},
          {"keyphrase_popularity", r.keyphrase_popularity},
          {"keyphrase_examples", r.keyphrase_examples},
          {"text", r.text},
          {"r_kw", r.r_kw},
          {"text_examples", r.text_examples},
          {"loo",
           {{"mean", r.loo.mean},
            {"users_evaluated", r.loo.users_evaluated},
            {"users_skipped", r.loo.users_skipped},
            {"slate_size", r.loo.slate_size}}}};
}

ModelEvalReport EvaluateModel(const Engine &engine, const ModelData &data,
                              const ModelEvalOptions &options) {
  const int64_t k = engine.num_keyphrases();
  std::vector<const Example *> examples = data.Select(options.split);
  std::vector<double> pop = KeyphrasePopularity(data, k);
  const std::vector<int64_t> pop_rank = RankByScore(pop);

  double label_mean = 0.0;
  int64_t n_train = 0;
  for (const Example &e : data.examples) {
    if (e.split != Split::kTrain) continue;
    label_mean += e.label;
    ++n_train;
  }
  if (n_train > 0) label_mean /= n_train;

  ModelEvalReport r;
  r.cutoffs = options.cutoffs;
  r.keyphrase.assign(r.cutoffs.size(), RankingMetrics{});
  r.keyphrase_popularity.assign(r.cutoffs.size(), RankingMetrics{});
  double sq = 0.0;
  int64_t r_kw_count = 0;
  for (const Example *e : examples) {
    LatentState s = engine.EncodeIndex(e->user, e->item);
    auto [probs, set] = engine.ExplainKeyphrases(s.z, engine.hyper().display_keyphrases);
    const double pred = engine.PredictRating(s.z);
    r.mae += std::abs(pred - e->label);
    sq += (pred - e->label) * (pred - e->label);
    r.global_mean_mae += std::abs(label_mean - e->label);
    ++r.examples;

    std::set<int64_t> relevant = Bits(e->keyphrases);
    if (!relevant.empty()) {
      const std::vector<int64_t> model_rank = RankByScore(probs);
      for (size_t c = 0; c < r.cutoffs.size(); ++c) {
        AddInto(r.keyphrase[c], ComputeRankingMetrics(model_rank, relevant, r.cutoffs[c]));
        AddInto(r.keyphrase_popularity[c],
                ComputeRankingMetrics(pop_rank, relevant, r.cutoffs[c]));
      }
      ++r.keyphrase_examples;
    }
    if (r.text_examples < options.max_text_examples && !e->targets.empty()) {
      TokenSeq gen = engine.GenerateJustification(s.z, engine.EncodeAspects(set), options.decode);
      std::vector<std::string> words = engine.DecodeTokens(gen);
      std::vector<std::vector<std::string>> refs;
      for (const TokenSeq &t : e->targets) refs.push_back(engine.DecodeTokens(t));
      TextOverlap t = ComputeTextOverlap(words, refs);
      for (size_t n = 0; n < 4; ++n) r.text.bleu[n] += t.bleu[n];
      r.text.rouge_l += t.rouge_l;
      ++r.text_examples;
      if (!relevant.empty()) {
        r.r_kw += RKw(words, Phrases(engine, e->keyphrases));
        ++r_kw_count;
      }
    }
  }
  if (r.examples > 0) {
    r.mae /= r.examples;
    r.rmse = std::sqrt(sq / r.examples);
    r.global_mean_mae /= r.examples;
  }
  for (size_t c = 0; c < r.cutoffs.size(); ++c) {
    DivideBy(r.keyphrase[c], r.keyphrase_examples);
    DivideBy(r.keyphrase_popularity[c], r.keyphrase_examples);
  }
  if (r.text_examples > 0) {
    for (double &b : r.text.bleu) b /= r.text_examples;
    r.text.rouge_l /= r.text_examples;
  }
  if (r_kw_count > 0) r.r_kw /= r_kw_count;
  if (options.run_loo) {
    r.loo = LeaveOneOut(
        BuildLooUsers(data), data.items.size(),
        [&engine](int64_t u, int64_t i) { return engine.PredictRating(engine.EncodeIndex(u, i).z); },
        options.loo);
  }
  return r;
}

const RankingMetrics &KeyphraseAt(const ModelEvalReport &r, int64_t n, bool popularity) {
  for (size_t c = 0; c < r.cutoffs.size(); ++c) {
    if (r.cutoffs[c] == n) return popularity ? r.keyphrase_popularity[c] : r.keyphrase[c];
  }
  throw Error("invalid-input", "cutoff " + std::to_string(n) + " was not evaluated");
}

nlohmann::json ToJson(const FMapReport &r) {
  nlohmann::json per = nlohmann::json::array();
  for (size_t c = 0; c < r.cutoffs.size(); ++c) {
    per.push_back({{"n", r.cutoffs[c]}, {"fmap", r.fmap[c]}});
  }
  return {{"pairs", r.pairs}, {"per_cutoff", per}, {"converged", r.converged},
          {"critiqued", r.critiqued}};
}

FMapReport RunFMapExperiment(const Engine &engine, const FMapOptions &options) {
  options.critique.Validate();
  FMapReport report;
  report.cutoffs = options.cutoffs;
  std::vector<std::vector<double>> values(options.cutoffs.size());
  if (options.n_pairs <= 0) {
    report.fmap.assign(options.cutoffs.size(), MeanStd{});
    return report;
  }
  Rng rng(MixSeed(options.seed, "fmap"));
  const std::vector<std::string> catalog = engine.bundle().items.ids();
  SessionOptions session_options;
  session_options.with_justification = false;
  for (const std::string &user : SampleUsers(engine, options.n_pairs, rng)) {
    CritiqueSession session = StartSession(engine, "fmap", user, catalog, session_options);
    const std::vector<int64_t> before = session.ranking;
    const std::set<int64_t> shown_set = Bits(session.TopExplanation().keyphrase_set);
    const std::vector<int64_t> shown(shown_set.begin(), shown_set.end());
    const int64_t keyphrase = shown[rng.Index(shown.size())];
    std::set<int64_t> affected;
    for (size_t c = 0; c < catalog.size(); ++c) {
      if (session.explanations[c].keyphrase_set[keyphrase]) affected.insert(static_cast<int64_t>(c));
    }
    RerankOutcome outcome = RerankAfterCritique(
        engine, session, {{keyphrase, EditAction::kRemove}}, options.critique, session_options);
    for (const CritiqueTrace &t : outcome.traces) {
      ++report.critiqued;
      report.converged += t.converged ? 1 : 0;
    }
    for (size_t c = 0; c < options.cutoffs.size(); ++c) {
      values[c].push_back(FMap(before, session.ranking, affected, options.cutoffs[c]));
    }
    ++report.pairs;
  }
  for (const auto &v : values) report.fmap.push_back(Summarize(v));
  return report;
}

nlohmann::json ToJson(const MultistepReport &r) {
  nlohmann::json steps = nlohmann::json::array();
  for (size_t s = 0; s < r.precision.size(); ++s) {
    steps.push_back({{"step", s},
                     {"ndcg", r.ndcg[s]},
                     {"map", r.map[s]},
                     {"precision", r.precision[s]},
                     {"recall", r.recall[s]},
                     {"r_kw", r.r_kw[s]},
                     {"target_rank", r.target_rank[s]},
                     {"saturated", r.saturated[s]}});
  }
  return {{"users", r.users}, {"steps", steps}};
}

MultistepReport RunMultistepExperiment(const Engine &engine, const ModelData &data,
                                       const MultistepOptions &options) {
  options.critique.Validate();
  if (options.max_steps < 0 || options.n_candidates < 1) {
    throw Error("invalid-config", "multistep needs max_steps >= 0 and n_candidates >= 1");
  }
  // Liked interactions with at least one keyphrase, grouped by user.
  std::map<int64_t, std::vector<const Example *>> liked;
  for (const Example &e : data.examples) {
    if (e.label > 0.5f && std::any_of(e.keyphrases.begin(), e.keyphrases.end(),
                                      [](uint8_t b) { return b != 0; })) {
      liked[e.user].push_back(&e);
    }
  }
  std::vector<int64_t> users;
  for (const auto &[u, list] : liked) users.push_back(u);

  const size_t steps = static_cast<size_t>(options.max_steps) + 1;
  std::vector<std::vector<double>> ndcg(steps), map(steps), prec(steps), rec(steps), rkw(steps),
      rank(steps);
  MultistepReport report;
  report.saturated.assign(steps, 0);
  if (users.empty() || options.n_users <= 0) {
    report.ndcg = report.map = report.precision = report.recall = report.r_kw =
        report.target_rank = std::vector<MeanStd>(steps);
    return report;
  }

  Rng rng(MixSeed(options.seed, "multistep"));
  SessionOptions session_options;
  session_options.with_justification = options.with_justification;
  const int64_t n_items = engine.bundle().items.size();
  for (int64_t n = 0; n < options.n_users; ++n) {
    const int64_t user = users[rng.Index(users.size())];
    const auto &choices = liked.at(user);
    const Example *target = choices[rng.Index(choices.size())];
    std::vector<std::string> candidates{engine.bundle().items.Id(target->item)};
    const int64_t others = std::min<int64_t>(options.n_candidates - 1, n_items - 1);
    for (uint64_t pick : rng.SampleWithoutReplacement(n_items - 1, others)) {
      const int64_t item = static_cast<int64_t>(pick) >= target->item ? pick + 1 : pick;
      candidates.push_back(engine.bundle().items.Id(item));
    }
    CritiqueSession session = StartSession(engine, "multistep", engine.bundle().users.Id(user),
                                           candidates, session_options);
    auto record = [&](size_t s, const StepOutcome &o) {
      ndcg[s].push_back(o.metrics.ndcg);
      map[s].push_back(o.metrics.map);
      prec[s].push_back(o.metrics.precision);
      rec[s].push_back(o.metrics.recall);
      rkw[s].push_back(o.r_kw);
      rank[s].push_back(static_cast<double>(o.target_rank));
      report.saturated[s] += o.saturated ? 1 : 0;
    };
    record(0, EvaluateStep(engine, session, 0, target->keyphrases, session_options,
                           options.cutoff));
    Rng step_rng(MixSeed(options.seed, "multistep-user:" + std::to_string(n)));
    for (size_t s = 1; s < steps; ++s) {
      record(s, MultistepStep(engine, session, 0, target->keyphrases, step_rng,
                              options.critique, session_options, options.cutoff));
    }
    ++report.users;
  }
  for (size_t s = 0; s < steps; ++s) {
    report.ndcg.push_back(Summarize(ndcg[s]));
    report.map.push_back(Summarize(map[s]));
    report.precision.push_back(Summarize(prec[s]));
    report.recall.push_back(Summarize(rec[s]));
    report.r_kw.push_back(Summarize(rkw[s]));
    report.target_rank.push_back(Summarize(rank[s]));
  }
  return report;
}

nlohmann::json ToJson(const ConditioningReport &r) {
  return {{"examples", r.examples}, {"conditioned", r.conditioned}, {"ablated", r.ablated}};
}

ConditioningReport RunConditioningExperiment(const Engine &engine, const ModelData &data,
                                             Split split, int64_t max_examples,
                                             const DecodeOptions &decode) {
  std::vector<double> with, without;
  const std::vector<double> zero(engine.hyper().d_model, 0.0);
  for (const Example *e : data.Select(split)) {
    if (static_cast<int64_t>(with.size()) >= max_examples) break;
    std::vector<std::string> phrases = Phrases(engine, e->keyphrases);
    if (phrases.empty()) continue;
    LatentState s = engine.EncodeIndex(e->user, e->item);
    with.push_back(RKw(engine.DecodeTokens(engine.GenerateJustification(
                           s.z, engine.EncodeAspects(e->keyphrases), decode)),
                       phrases));
    without.push_back(
        RKw(engine.DecodeTokens(engine.GenerateJustification(s.z, zero, decode)), phrases));
  }
  ConditioningReport r;
  r.examples = static_cast<int64_t>(with.size());
  r.conditioned = Summarize(with);
  r.ablated = Summarize(without);
  return r;
}

}  // namespace critrec
