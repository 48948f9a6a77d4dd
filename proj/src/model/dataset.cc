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

#include "critrec/model/dataset.h"

#include <algorithm>

#include "critrec/common/error.h"
#include "critrec/corpus/history.h"

namespace critrec {

EntityTable::EntityTable(std::vector<std::string> ids) : ids_(std::move(ids)) {
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<int64_t>(i)).second) {
      throw Error("invalid-input", "duplicate entity id " + ids_[i]);
    }
  }
}

int64_t EntityTable::Find(const std::string &id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown-entity", id);
  return it->second;
}

std::vector<const Example *> ModelData::Select(Split split) const {
  std::vector<const Example *> out;
  for (const Example &e : examples) {
    if (e.split == split) out.push_back(&e);
  }
  return out;
}

namespace {

TokenSeq Truncate(TokenSeq seq, int64_t max_len) {
  if (static_cast<int64_t>(seq.size()) > max_len) seq.resize(max_len);
  return seq;
}

std::vector<TokenSeq> EncodeHistory(const std::string &owner,
                                    const std::vector<Justification> &pool,
                                    const TokenVocab &vocab, int64_t n_just, int64_t max_len,
                                    uint64_t seed) {
  JustificationReference ref = BuildHistory(owner, pool, static_cast<size_t>(n_just), seed);
  std::vector<TokenSeq> out;
  out.reserve(ref.justifications.size());
  for (const Justification &j : ref.justifications) {
    out.push_back(Truncate(vocab.Encode(j.tokens), max_len));
  }
  return out;
}

}  // namespace

ModelData BuildModelData(const PreparedCorpus &corpus, const TokenVocab &vocab, int64_t n_just,
                         int64_t max_len, uint64_t seed) {
  auto has_pool = [](const std::map<std::string, std::vector<Justification>> &pools,
                     const std::string &id) {
    auto it = pools.find(id);
    return it != pools.end() && !it->second.empty();
  };

  std::vector<std::string> users, items;
  for (const Interaction &x : corpus.interactions) {
    if (has_pool(corpus.user_pool, x.user_id)) users.push_back(x.user_id);
    if (has_pool(corpus.item_pool, x.item_id)) items.push_back(x.item_id);
  }
  for (auto *v : {&users, &items}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }

  ModelData data;
  data.users = EntityTable(users);
  data.items = EntityTable(items);
  for (const std::string &u : users) {
    data.user_histories.push_back(
        EncodeHistory(u, corpus.user_pool.at(u), vocab, n_just, max_len, seed));
  }
  for (const std::string &i : items) {
    data.item_histories.push_back(
        EncodeHistory(i, corpus.item_pool.at(i), vocab, n_just, max_len, seed));
  }

  for (const Interaction &x : corpus.interactions) {
    if (!data.users.Contains(x.user_id) || !data.items.Contains(x.item_id)) {
      ++data.dropped_cold;
      continue;
    }
    Example e;
    e.review_id = x.review_id;
    e.user = data.users.Find(x.user_id);
    e.item = data.items.Find(x.item_id);
    e.rating = x.rating;
    e.label = static_cast<float>(x.label);
    e.keyphrases = x.keyphrases;
    for (const auto &t : x.targets) e.targets.push_back(Truncate(vocab.Encode(t), max_len));
    e.split = x.split;
    data.examples.push_back(std::move(e));
  }
  return data;
}

std::vector<int64_t> KeyphraseTokenIds(const KeyphraseVocabulary &keyphrases,
                                       const TokenVocab &vocab) {
  std::vector<int64_t> ids;
  ids.reserve(keyphrases.size());
  for (const KeyphraseEntry &e : keyphrases.entries()) ids.push_back(vocab.Id(e.phrase));
  return ids;
}

}  // namespace critrec
