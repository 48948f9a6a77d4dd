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

#ifndef CRITREC_MODEL_DATASET_H_
#define CRITREC_MODEL_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "critrec/corpus/interactions.h"
#include "critrec/model/token_vocab.h"

namespace critrec {

using TokenSeq = std::vector<int64_t>;

// Dense index over user or item identifiers.
class EntityTable {
 public:
  EntityTable() = default;
  explicit EntityTable(std::vector<std::string> ids);

  // Throws Error("unknown-entity").
  int64_t Find(const std::string &id) const;
  bool Contains(const std::string &id) const { return index_.count(id) > 0; }
  const std::string &Id(int64_t index) const { return ids_.at(index); }
  const std::vector<std::string> &ids() const { return ids_; }
  int64_t size() const { return static_cast<int64_t>(ids_.size()); }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, int64_t> index_;
};

struct Example {
  std::string review_id;
  int64_t user = 0;
  int64_t item = 0;
  double rating = 0.0;
  float label = 0.0f;
  BitVector keyphrases;
  std::vector<TokenSeq> targets;  // token ids without begin/end markers
  Split split = Split::kTrain;
};

struct ModelData {
  EntityTable users;
  EntityTable items;
  // [entity][justification] token ids, each truncated to max_just_len.
  std::vector<std::vector<TokenSeq>> user_histories;
  std::vector<std::vector<TokenSeq>> item_histories;
  std::vector<Example> examples;
  // Interactions dropped because the user or item had no training
  // justifications to build a history from.
  int64_t dropped_cold = 0;

  std::vector<const Example *> Select(Split split) const;
};

ModelData BuildModelData(const PreparedCorpus &corpus, const TokenVocab &vocab, int64_t n_just,
                         int64_t max_len, uint64_t seed);

// Token ids of each keyphrase, in vocabulary order.
std::vector<int64_t> KeyphraseTokenIds(const KeyphraseVocabulary &keyphrases,
                                       const TokenVocab &vocab);

}  // namespace critrec

#endif  // CRITREC_MODEL_DATASET_H_
