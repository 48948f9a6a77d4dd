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

#ifndef CRITREC_CORPUS_KEYPHRASES_H_
#define CRITREC_CORPUS_KEYPHRASES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "critrec/corpus/markers.h"
#include "critrec/corpus/review.h"

namespace critrec {

struct KeyphraseEntry {
  std::string phrase;  // a lemma
  std::string aspect;

  bool operator==(const KeyphraseEntry &) const = default;
};

// Ordered keyphrase list. The index of an entry is its bit position in every
// keyphrase vector, so the order is persisted with the model.
class KeyphraseVocabulary {
 public:
  KeyphraseVocabulary() = default;
  explicit KeyphraseVocabulary(std::vector<KeyphraseEntry> entries);

  const std::vector<KeyphraseEntry> &entries() const { return entries_; }
  const KeyphraseEntry &operator[](size_t i) const { return entries_[i]; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<size_t> IndexOf(const std::string &phrase) const;
  std::map<std::string, size_t> CountsPerAspect() const;

  bool operator==(const KeyphraseVocabulary &other) const { return entries_ == other.entries_; }

 private:
  std::vector<KeyphraseEntry> entries_;
  std::map<std::string, size_t> index_;
};

using BitVector = std::vector<uint8_t>;

// Per aspect (aspects in name order) keeps the k most frequent lemmatized
// content unigrams of that aspect's markers; ties go to the
// lexicographically smaller lemma. A lemma already claimed by an earlier
// aspect is skipped. Throws Error("insufficient-vocabulary") naming the first
// aspect that cannot supply k candidates.
KeyphraseVocabulary MineKeyphrases(const std::vector<Review> &reviews, size_t k_per_aspect,
                                   const FilterRules &rules = FilterRules::Defaults());

// Bit k is set iff entry k's lemma occurs among the lemmatized tokens.
BitVector VectorizeKeyphrases(const std::vector<std::string> &tokens,
                              const KeyphraseVocabulary &vocab);

void to_json(nlohmann::json &j, const KeyphraseVocabulary &vocab);
void from_json(const nlohmann::json &j, KeyphraseVocabulary &vocab);

}  // namespace critrec

#endif  // CRITREC_CORPUS_KEYPHRASES_H_
