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

#ifndef CRITREC_CORPUS_INTERACTIONS_H_
#define CRITREC_CORPUS_INTERACTIONS_H_

#include <map>
#include <string>
#include <vector>

#include "critrec/corpus/keyphrases.h"
#include "critrec/corpus/markers.h"
#include "critrec/corpus/split.h"

namespace critrec {

struct Interaction {
  std::string review_id;
  std::string user_id;
  std::string item_id;
  int64_t timestamp = 0;
  double rating = 0.0;
  int label = 0;
  BitVector keyphrases;
  std::vector<std::vector<std::string>> targets;  // at most two justifications
  Split split = Split::kTrain;
};

// 1 iff rating > threshold.
int BinarizeRating(double rating, double threshold);

// The (up to) `limit` longest justifications; equal lengths are ordered by
// their joined text.
std::vector<std::vector<std::string>> PickTargetJustifications(
    const std::vector<Justification> &candidates, size_t limit = 2);

struct PreparedCorpus {
  std::vector<Interaction> interactions;  // retained reviews, input order
  // Training-split justifications per user and per item.
  std::map<std::string, std::vector<Justification>> user_pool;
  std::map<std::string, std::vector<Justification>> item_pool;
};

PreparedCorpus PrepareCorpus(const std::vector<Review> &reviews, const SplitAssignment &split,
                             const KeyphraseVocabulary &vocab, const FilterRules &rules,
                             double rating_threshold);

}  // namespace critrec

#endif  // CRITREC_CORPUS_INTERACTIONS_H_
