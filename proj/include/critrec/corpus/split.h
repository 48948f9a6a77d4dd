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

#ifndef CRITREC_CORPUS_SPLIT_H_
#define CRITREC_CORPUS_SPLIT_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "critrec/corpus/review.h"

namespace critrec {

enum class Split { kTrain, kValid, kTest };

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

struct SplitAssignment {
  std::map<std::string, Split> by_review;  // retained reviews only
  std::vector<std::string> removed_users;  // below the interaction minimum

  size_t Count(Split split) const;
};

// Per user, reviews sorted by (timestamp, review_id): the first
// floor(train_fraction * n) go to train; the rest is halved between valid and
// test, an odd remainder giving test the extra review. Users with fewer than
// `min_interactions` reviews are dropped. Throws Error("empty-corpus") if no
// user survives.
SplitAssignment SplitCorpus(const std::vector<Review> &reviews, size_t min_interactions,
                            double train_fraction);

}  // namespace critrec

#endif  // CRITREC_CORPUS_SPLIT_H_
