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

#ifndef CRITREC_EVAL_PREFERENCE_H_
#define CRITREC_EVAL_PREFERENCE_H_

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "critrec/eval/ranking_metrics.h"
#include "critrec/model/dataset.h"

namespace critrec {

struct PreferencePair {
  double rating_i = 0.0;
  double rating_j = 0.0;
  double score_i = 0.0;
  double score_j = 0.0;
};

// (concordant - discordant) / total over pairs with |rating_i - rating_j| >=
// delta_min. Pairs with equal true ratings never qualify; score ties count as
// half discordant. Throws Error("no-pairs").
double KendallTauDelta(const std::vector<PreferencePair> &pairs, double delta_min);

struct BwsCounts {
  int64_t best = 0;
  int64_t worst = 0;
  int64_t total = 0;
};

// (best - worst) / total. Throws Error("invalid-input") when total <= 0 or
// best + worst > total.
double BwsScore(const BwsCounts &counts);

struct LooUser {
  int64_t user = 0;
  std::vector<int64_t> liked_test_items;
  std::set<int64_t> seen_items;  // every item the user interacted with
};

// Users with at least one liked test interaction.
std::vector<LooUser> BuildLooUsers(const ModelData &data);

struct LooOptions {
  int64_t n_negatives = 99;
  int64_t cutoff = 10;
  uint64_t seed = 1;
};

struct LooReport {
  RankingMetrics mean;
  int64_t users_evaluated = 0;
  int64_t users_skipped = 0;  // fewer unseen items than n_negatives
  int64_t slate_size = 0;
};

using ScoreFn = std::function<double(int64_t user, int64_t item)>;

// One liked test item against n_negatives unseen items per user, ranked by
// `score` (ties to the lower item index).
LooReport LeaveOneOut(const std::vector<LooUser> &users, int64_t n_items, const ScoreFn &score,
                      const LooOptions &options);

}  // namespace critrec

#endif  // CRITREC_EVAL_PREFERENCE_H_
