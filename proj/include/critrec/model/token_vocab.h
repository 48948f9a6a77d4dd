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

#ifndef CRITREC_MODEL_TOKEN_VOCAB_H_
#define CRITREC_MODEL_TOKEN_VOCAB_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "critrec/corpus/keyphrases.h"
#include "critrec/corpus/markers.h"

namespace critrec {

class TokenVocab {
 public:
  static constexpr int64_t kPad = 0;
  static constexpr int64_t kBos = 1;
  static constexpr int64_t kEos = 2;
  static constexpr int64_t kUnk = 3;

  TokenVocab();
  explicit TokenVocab(const std::vector<std::string> &tokens);

  // Specials, then every keyphrase, then justification tokens in first-seen
  // order.
  static TokenVocab Build(const std::map<std::string, std::vector<Justification>> &pools,
                          const KeyphraseVocabulary &keyphrases);

  int64_t Id(const std::string &token) const;
  const std::string &Token(int64_t id) const { return tokens_.at(id); }
  std::vector<int64_t> Encode(const std::vector<std::string> &tokens) const;
  // Stops at the first end token; drops other specials.
  std::vector<std::string> Decode(const std::vector<int64_t> &ids) const;
  int64_t size() const { return static_cast<int64_t>(tokens_.size()); }
  const std::vector<std::string> &tokens() const { return tokens_; }

 private:
  void Insert(const std::string &token);

  std::vector<std::string> tokens_;
  std::map<std::string, int64_t> index_;
};

}  // namespace critrec

#endif  // CRITREC_MODEL_TOKEN_VOCAB_H_
