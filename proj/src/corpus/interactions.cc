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

#include "critrec/corpus/interactions.h"

#include <algorithm>

#include "critrec/corpus/text.h"

namespace critrec {

int BinarizeRating(double rating, double threshold) { return rating > threshold ? 1 : 0; }

std::vector<std::vector<std::string>> PickTargetJustifications(
    const std::vector<Justification> &candidates, size_t limit) {
  std::vector<std::pair<std::string, const Justification *>> order;
  for (const Justification &j : candidates) order.emplace_back(text::Join(j.tokens), &j);
  std::stable_sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
    const size_t la = a.second->tokens.size(), lb = b.second->tokens.size();
    return la != lb ? la > lb : a.first < b.first;
  });
  std::vector<std::vector<std::string>> out;
  for (size_t i = 0; i < order.size() && i < limit; ++i) out.push_back(order[i].second->tokens);
  return out;
}

PreparedCorpus PrepareCorpus(const std::vector<Review> &reviews, const SplitAssignment &split,
                             const KeyphraseVocabulary &vocab, const FilterRules &rules,
                             double rating_threshold) {
  PreparedCorpus out;
  for (const Review &review : reviews) {
    auto it = split.by_review.find(review.review_id);
    if (it == split.by_review.end()) continue;
    FilterOutcome filtered = FilterMarkers(review, rules);
    Interaction x;
    x.review_id = review.review_id;
    x.user_id = review.user_id;
    x.item_id = review.item_id;
    x.timestamp = review.timestamp;
    x.rating = review.overall_rating;
    x.label = BinarizeRating(review.overall_rating, rating_threshold);
    x.keyphrases = VectorizeKeyphrases(review.tokens, vocab);
    x.targets = PickTargetJustifications(filtered.kept);
    x.split = it->second;
    if (x.split == Split::kTrain) {
      for (const Justification &j : filtered.kept) {
        out.user_pool[review.user_id].push_back(j);
        out.item_pool[review.item_id].push_back(j);
      }
    }
    out.interactions.push_back(std::move(x));
  }
  return out;
}

}  // namespace critrec
