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

#include "critrec/corpus/split.h"

#include <algorithm>
#include <cmath>

#include "critrec/common/error.h"

namespace critrec {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw Error("invalid-split", std::string(name));
}

size_t SplitAssignment::Count(Split split) const {
  return static_cast<size_t>(std::count_if(by_review.begin(), by_review.end(),
                                           [split](const auto &kv) { return kv.second == split; }));
}

SplitAssignment SplitCorpus(const std::vector<Review> &reviews, size_t min_interactions,
                            double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("contract", "train_fraction must lie in (0, 1)");
  }
  std::map<std::string, std::vector<const Review *>> by_user;
  for (const Review &r : reviews) by_user[r.user_id].push_back(&r);

  SplitAssignment out;
  for (auto &[user, list] : by_user) {
    if (list.size() < min_interactions) {
      out.removed_users.push_back(user);
      continue;
    }
    std::sort(list.begin(), list.end(), [](const Review *a, const Review *b) {
      return a->timestamp != b->timestamp ? a->timestamp < b->timestamp
                                          : a->review_id < b->review_id;
    });
    const size_t n = list.size();
    const size_t n_train = static_cast<size_t>(std::floor(train_fraction * static_cast<double>(n)));
    const size_t n_valid = (n - n_train) / 2;
    for (size_t i = 0; i < n; ++i) {
      Split s = i < n_train ? Split::kTrain : (i < n_train + n_valid ? Split::kValid : Split::kTest);
      out.by_review[list[i]->review_id] = s;
    }
  }
  if (out.by_review.empty()) throw Error("empty-corpus", "no user meets the interaction minimum");
  return out;
}

}  // namespace critrec
