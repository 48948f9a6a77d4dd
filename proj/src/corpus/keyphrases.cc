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

#include "critrec/corpus/keyphrases.h"

#include <algorithm>
#include <set>

#include "critrec/common/error.h"
#include "critrec/corpus/text.h"

namespace critrec {

KeyphraseVocabulary::KeyphraseVocabulary(std::vector<KeyphraseEntry> entries)
    : entries_(std::move(entries)) {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].phrase, i).second) {
      throw Error("invalid-vocabulary", "duplicate keyphrase " + entries_[i].phrase);
    }
  }
}

std::optional<size_t> KeyphraseVocabulary::IndexOf(const std::string &phrase) const {
  auto it = index_.find(phrase);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, size_t> KeyphraseVocabulary::CountsPerAspect() const {
  std::map<std::string, size_t> counts;
  for (const KeyphraseEntry &e : entries_) ++counts[e.aspect];
  return counts;
}

KeyphraseVocabulary MineKeyphrases(const std::vector<Review> &reviews, size_t k_per_aspect,
                                   const FilterRules &rules) {
  if (k_per_aspect < 1) throw Error("contract", "k_per_aspect must be positive");
  std::map<std::string, std::map<std::string, int64_t>> counts;
  for (const Review &review : reviews) {
    for (const auto &[aspect, rating] : review.aspect_ratings) counts[aspect];
    const int64_t n = static_cast<int64_t>(review.tokens.size());
    for (const MarkerSpan &span : review.marker_spans) {
      if (span.start < 0 || span.start >= span.end || span.end > n) continue;
      auto &aspect_counts = counts[span.aspect];
      for (int64_t t = span.start; t < span.end; ++t) {
        if (!IsContentToken(review.tokens[t], rules)) continue;
        const std::string lemma = text::Lemmatize(review.tokens[t]);
        if (IsContentToken(lemma, rules)) ++aspect_counts[lemma];
      }
    }
  }
  if (counts.empty()) throw Error("insufficient-vocabulary", "corpus has no aspects");

  std::vector<KeyphraseEntry> entries;
  std::set<std::string> taken;
  for (const auto &[aspect, lemma_counts] : counts) {
    std::vector<std::pair<std::string, int64_t>> ranked(lemma_counts.begin(), lemma_counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    size_t picked = 0;
    for (const auto &[lemma, count] : ranked) {
      if (picked == k_per_aspect) break;
      if (!taken.insert(lemma).second) continue;
      entries.push_back({lemma, aspect});
      ++picked;
    }
    if (picked < k_per_aspect) {
      throw Error("insufficient-vocabulary",
                  "aspect " + aspect + " has " + std::to_string(picked) + " candidates, need " +
                      std::to_string(k_per_aspect));
    }
  }
  return KeyphraseVocabulary(std::move(entries));
}

BitVector VectorizeKeyphrases(const std::vector<std::string> &tokens,
                              const KeyphraseVocabulary &vocab) {
  BitVector bits(vocab.size(), 0);
  for (const std::string &token : tokens) {
    if (auto idx = vocab.IndexOf(text::Lemmatize(token))) bits[*idx] = 1;
  }
  return bits;
}

void to_json(nlohmann::json &j, const KeyphraseVocabulary &vocab) {
  nlohmann::json entries = nlohmann::json::array();
  for (const KeyphraseEntry &e : vocab.entries()) entries.push_back({e.phrase, e.aspect});
  j = nlohmann::json{{"version", 1}, {"entries", entries}};
}

void from_json(const nlohmann::json &j, KeyphraseVocabulary &vocab) {
  std::vector<KeyphraseEntry> entries;
  for (const auto &e : j.at("entries")) {
    entries.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
  }
  vocab = KeyphraseVocabulary(std::move(entries));
}

}  // namespace critrec
