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

#include "critrec/eval/ranking_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "critrec/common/error.h"

namespace critrec {

void to_json(nlohmann::json &j, const RankingMetrics &m) {
  j = nlohmann::json{{"ndcg", m.ndcg}, {"map", m.map}, {"precision", m.precision},
                     {"recall", m.recall}};
}

RankingMetrics ComputeRankingMetrics(const std::vector<int64_t> &ranked,
                                     const std::set<int64_t> &relevant, int64_t n) {
  if (n < 1) throw Error("invalid-input", "cutoff must be at least 1");
  if (relevant.empty()) throw Error("no-relevant", "empty relevant set");
  const int64_t cut = std::min<int64_t>(n, static_cast<int64_t>(ranked.size()));
  double dcg = 0.0, ap = 0.0;
  int64_t hits = 0;
  for (int64_t r = 0; r < cut; ++r) {
    if (relevant.count(ranked[r]) == 0) continue;
    ++hits;
    dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
    ap += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  const int64_t ideal = std::min<int64_t>(static_cast<int64_t>(relevant.size()), n);
  double idcg = 0.0;
  for (int64_t r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);

  RankingMetrics m;
  m.ndcg = dcg / idcg;
  m.map = ap / static_cast<double>(ideal);
  m.precision = static_cast<double>(hits) / static_cast<double>(n);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  return m;
}

std::vector<int64_t> RankByScore(const std::vector<double> &scores) {
  std::vector<int64_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](int64_t a, int64_t b) { return scores[a] > scores[b]; });
  return order;
}

double FMap(const std::vector<int64_t> &before, const std::vector<int64_t> &after,
            const std::set<int64_t> &affected, int64_t n) {
  return ComputeRankingMetrics(before, affected, n).map -
         ComputeRankingMetrics(after, affected, n).map;
}

}  // namespace critrec
