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

#ifndef CRITREC_EVAL_RANKING_METRICS_H_
#define CRITREC_EVAL_RANKING_METRICS_H_

#include <cstdint>
#include <set>
#include <vector>

#include "json.hpp"

namespace critrec {

struct RankingMetrics {
  double ndcg = 0.0;
  double map = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

void to_json(nlohmann::json &j, const RankingMetrics &m);

// Binary-relevance metrics of `ranked` (best first, unique ids) truncated at
// n. NDCG uses a log2 discount; MAP is normalized by min(|relevant|, n).
// Throws Error("no-relevant") for an empty relevant set.
RankingMetrics ComputeRankingMetrics(const std::vector<int64_t> &ranked,
                                     const std::set<int64_t> &relevant, int64_t n);

// Positions sorted by descending score; ties keep the lower position first.
std::vector<int64_t> RankByScore(const std::vector<double> &scores);

// MAP@n of the affected set before minus after; positive when the affected
// ids fell. Throws Error("no-relevant") when `affected` is empty.
double FMap(const std::vector<int64_t> &before, const std::vector<int64_t> &after,
            const std::set<int64_t> &affected, int64_t n);

}  // namespace critrec

#endif  // CRITREC_EVAL_RANKING_METRICS_H_
