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

#ifndef CRITREC_EVAL_EXPERIMENTS_H_
#define CRITREC_EVAL_EXPERIMENTS_H_

#include <cstdint>
#include <vector>

#include "critrec/critique/critique.h"
#include "critrec/eval/preference.h"
#include "critrec/eval/ranking_metrics.h"
#include "critrec/eval/text_metrics.h"
#include "critrec/model/engine.h"
#include "json.hpp"

namespace critrec {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double ci95 = 0.0;    // normal-approximation half width
  int64_t n = 0;
};

MeanStd Summarize(const std::vector<double> &values);
void to_json(nlohmann::json &j, const MeanStd &m);

// Rating, keyphrase and text quality of the uncritiqued model on one split.
struct ModelEvalOptions {
  Split split = Split::kTest;
  std::vector<int64_t> cutoffs = {5, 10, 20};
  // Justifications are generated for at most this many examples (0 = none).
  int64_t max_text_examples = 200;
  DecodeOptions decode;
  LooOptions loo;
  bool run_loo = true;
};

struct ModelEvalReport {
  int64_t examples = 0;
  double mae = 0.0;  // against binary labels
  double rmse = 0.0;
  double global_mean_mae = 0.0;  // constant predictor at the training label mean
  std::vector<int64_t> cutoffs;
  // Means over examples with keyphrases, parallel to cutoffs.
  std::vector<RankingMetrics> keyphrase;
  std::vector<RankingMetrics> keyphrase_popularity;
  int64_t keyphrase_examples = 0;
  TextOverlap text;  // mean over generated examples
  double r_kw = 0.0;
  int64_t text_examples = 0;
  LooReport loo;
};

nlohmann::json ToJson(const ModelEvalReport &r);

ModelEvalReport EvaluateModel(const Engine &engine, const ModelData &data,
                              const ModelEvalOptions &options);

// Metrics at cutoff n from a report; throws Error("invalid-input") when n
// was not evaluated.
const RankingMetrics &KeyphraseAt(const ModelEvalReport &r, int64_t n, bool popularity = false);

// Training-split keyphrase frequencies.
std::vector<double> KeyphrasePopularity(const ModelData &data, int64_t k);

struct FMapOptions {
  int64_t n_pairs = 500;
  std::vector<int64_t> cutoffs = {5, 10, 20};
  uint64_t seed = 1;
  CritiqueParams critique;
};

struct FMapReport {
  std::vector<int64_t> cutoffs;
  std::vector<MeanStd> fmap;  // parallel to cutoffs
  int64_t pairs = 0;
  int64_t converged = 0;  // critiqued latents that reached the threshold
  int64_t critiqued = 0;  // critiqued latents in total
};

nlohmann::json ToJson(const FMapReport &r);

// Samples (user, keyphrase of the top item's explanation) pairs, removes the
// keyphrase over the whole catalog and reports MAP@N before minus after for
// the items whose explanation contained it.
FMapReport RunFMapExperiment(const Engine &engine, const FMapOptions &options);

struct MultistepOptions {
  int64_t n_users = 200;
  int64_t max_steps = 5;
  int64_t n_candidates = 20;
  int64_t cutoff = 10;
  uint64_t seed = 1;
  bool with_justification = true;
  CritiqueParams critique;
};

struct MultistepReport {
  int64_t users = 0;
  // Index s holds the state after s critiques.
  std::vector<MeanStd> ndcg, map, precision, recall, r_kw, target_rank;
  std::vector<int64_t> saturated;
};

nlohmann::json ToJson(const MultistepReport &r);

// For each sampled user, a liked interaction with keyphrases is the target;
// candidates are its item plus random others. Each step adds one missing
// target keyphrase.
MultistepReport RunMultistepExperiment(const Engine &engine, const ModelData &data,
                                       const MultistepOptions &options);

struct ConditioningReport {
  int64_t examples = 0;
  MeanStd conditioned;  // R_KW with the ground-truth keyphrases as plan
  MeanStd ablated;      // R_KW with the aspect embedding zeroed
};

nlohmann::json ToJson(const ConditioningReport &r);

ConditioningReport RunConditioningExperiment(const Engine &engine, const ModelData &data,
                                             Split split, int64_t max_examples,
                                             const DecodeOptions &decode = {});

}  // namespace critrec

#endif  // CRITREC_EVAL_EXPERIMENTS_H_
