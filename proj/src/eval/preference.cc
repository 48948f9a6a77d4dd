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

#include "critrec/eval/preference.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "critrec/common/error.h"
#include "critrec/common/rng.h"

namespace critrec {

double KendallTauDelta(const std::vector<PreferencePair> &pairs, double delta_min) {
  double concordant = 0.0, discordant = 0.0;
  int64_t total = 0;
  for (const PreferencePair &p : pairs) {
    const double delta = std::abs(p.rating_i - p.rating_j);
    if (delta == 0.0 || delta < delta_min) continue;
    ++total;
    const double true_sign = p.rating_i > p.rating_j ? 1.0 : -1.0;
    const double diff = (p.score_i - p.score_j) * true_sign;
    if (diff > 0.0) {
      concordant += 1.0;
    } else if (diff < 0.0) {
      discordant += 1.0;
    } else {
      discordant += 0.5;
    }
  }
  if (total == 0) throw Error("no-pairs", "no pair reaches the minimum preference strength");
  return (concordant - discordant) / static_cast<double>(total);
}

double BwsScore(const BwsCounts &counts) {
  if (counts.total <= 0 || counts.best < 0 || counts.worst < 0 ||
      counts.best + counts.worst > counts.total) {
    throw Error("invalid-input", "inconsistent best-worst counts");
  }
  return static_cast<double>(counts.best - counts.worst) / static_cast<double>(counts.total);
}

std::vector<LooUser> BuildLooUsers(const ModelData &data) {
  std::map<int64_t, LooUser> by_user;
  for (const Example &e : data.examples) {
    LooUser &u = by_user[e.user];
    u.user = e.user;
    u.seen_items.insert(e.item);
    if (e.split == Split::kTest && e.label > 0.5f) u.liked_test_items.push_back(e.item);
  }
  std::vector<LooUser> out;
  for (auto &[id, u] : by_user) {
    if (!u.liked_test_items.empty()) out.push_back(std::move(u));
  }
  return out;
}

LooReport LeaveOneOut(const std::vector<LooUser> &users, int64_t n_items, const ScoreFn &score,
                      const LooOptions &options) {
  if (options.n_negatives < 0 || options.cutoff < 1) {
    throw Error("invalid-config", "leave-one-out needs n_negatives >= 0 and cutoff >= 1");
  }
  LooReport report;
  report.slate_size = options.n_negatives + 1;
  for (const LooUser &u : users) {
    std::vector<int64_t> unseen;
    for (int64_t i = 0; i < n_items; ++i) {
      if (u.seen_items.count(i) == 0) unseen.push_back(i);
    }
    if (static_cast<int64_t>(unseen.size()) < options.n_negatives ||
        u.liked_test_items.empty()) {
      ++report.users_skipped;
      continue;
    }
    Rng rng(MixSeed(options.seed, "loo:" + std::to_string(u.user)));
    const int64_t positive = u.liked_test_items[rng.Index(u.liked_test_items.size())];
    std::vector<int64_t> slate{positive};
    for (uint64_t k : rng.SampleWithoutReplacement(unseen.size(), options.n_negatives)) {
      slate.push_back(unseen[k]);
    }
    std::vector<double> scores;
    for (int64_t item : slate) scores.push_back(score(u.user, item));
    std::vector<int64_t> order(slate.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int64_t>(i);
    std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return slate[a] < slate[b];
    });
    std::vector<int64_t> ranked;
    for (int64_t pos : order) ranked.push_back(slate[pos]);
    RankingMetrics m = ComputeRankingMetrics(ranked, {positive}, options.cutoff);
    report.mean.ndcg += m.ndcg;
    report.mean.map += m.map;
    report.mean.precision += m.precision;
    report.mean.recall += m.recall;
    ++report.users_evaluated;
  }
  if (report.users_evaluated > 0) {
    const double n = static_cast<double>(report.users_evaluated);
    report.mean.ndcg /= n;
    report.mean.map /= n;
    report.mean.precision /= n;
    report.mean.recall /= n;
  }
  return report;
}

}  // namespace critrec
