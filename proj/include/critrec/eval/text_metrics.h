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

#ifndef CRITREC_EVAL_TEXT_METRICS_H_
#define CRITREC_EVAL_TEXT_METRICS_H_

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

namespace critrec {

struct TextOverlap {
  std::array<double, 4> bleu{};  // cumulative BLEU-1..4, scaled to [0, 100]
  double rouge_l = 0.0;          // LCS F-measure, scaled to [0, 100]
};

void to_json(nlohmann::json &j, const TextOverlap &t);

// Sentence-level BLEU with clipped counts against all references and the
// closest-length brevity penalty, plus the best ROUGE-L over references.
// Orders the candidate is too short to contain are left out of the geometric
// mean. Throws Error("invalid-input") without references.
TextOverlap ComputeTextOverlap(const std::vector<std::string> &candidate,
                               const std::vector<std::vector<std::string>> &references);

// Fraction of target keyphrase lemmas present among the lemmatized generated
// tokens. Throws Error("invalid-input") for an empty target list.
double RKw(const std::vector<std::string> &generated, const std::vector<std::string> &targets);

}  // namespace critrec

#endif  // CRITREC_EVAL_TEXT_METRICS_H_
