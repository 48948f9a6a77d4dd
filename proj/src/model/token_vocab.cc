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

#include "critrec/model/token_vocab.h"

namespace critrec {

TokenVocab::TokenVocab() {
  for (const char *s : {"<pad>", "<bos>", "<eos>", "<unk>"}) Insert(s);
}

TokenVocab::TokenVocab(const std::vector<std::string> &tokens) {
  for (const std::string &t : tokens) Insert(t);
}

void TokenVocab::Insert(const std::string &token) {
  if (index_.emplace(token, static_cast<int64_t>(tokens_.size())).second) tokens_.push_back(token);
}

TokenVocab TokenVocab::Build(const std::map<std::string, std::vector<Justification>> &pools,
                             const KeyphraseVocabulary &keyphrases) {
  TokenVocab vocab;
  for (const KeyphraseEntry &e : keyphrases.entries()) vocab.Insert(e.phrase);
  for (const auto &[owner, pool] : pools) {
    for (const Justification &j : pool) {
      for (const std::string &t : j.tokens) vocab.Insert(t);
    }
  }
  return vocab;
}

int64_t TokenVocab::Id(const std::string &token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int64_t> TokenVocab::Encode(const std::vector<std::string> &tokens) const {
  std::vector<int64_t> ids;
  ids.reserve(tokens.size());
  for (const std::string &t : tokens) ids.push_back(Id(t));
  return ids;
}

std::vector<std::string> TokenVocab::Decode(const std::vector<int64_t> &ids) const {
  std::vector<std::string> out;
  for (int64_t id : ids) {
    if (id == kEos) break;
    if (id == kPad || id == kBos) continue;
    out.push_back(Token(id));
  }
  return out;
}

}  // namespace critrec
