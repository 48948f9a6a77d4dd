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

#ifndef CRITREC_TESTS_TEST_UTIL_H_
#define CRITREC_TESTS_TEST_UTIL_H_

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include "critrec/corpus/interactions.h"
#include "critrec/corpus/synthetic.h"
#include "critrec/model/engine.h"
#include "critrec/model/model_io.h"
#include "critrec/model/trainer.h"

namespace critrec::testing {

inline SyntheticConfig ToyCorpusConfig() {
  SyntheticConfig cfg;
  cfg.n_users = 40;
  cfg.n_items = 30;
  cfg.reviews_per_user = 22;
  cfg.seed = 11;
  return cfg;
}

inline HyperParams ToyHyperParams() {
  HyperParams hp = HyperParams::Desk();
  hp.d_model = 16;
  hp.d_z = 16;
  hp.d_ff = 32;
  hp.n_layers = 1;
  hp.n_heads = 2;
  hp.n_just = 2;
  hp.max_just_len = 8;
  hp.head_dims = {12, 8};
  hp.batch = 16;
  hp.warmup = 10;
  hp.epochs = 1;
  hp.dropout = 0.0;
  return hp;
}

struct ToyPipeline {
  SyntheticCorpus corpus;
  KeyphraseVocabulary vocab;
  TokenVocab tokens;
  ModelData data;
  HyperParams hyper;
};

inline ToyPipeline BuildToyPipeline(const HyperParams &hp = ToyHyperParams(),
                                    const SyntheticConfig &cfg = ToyCorpusConfig()) {
  ToyPipeline p;
  p.hyper = hp;
  p.corpus = GenerateSyntheticCorpus(cfg);
  const FilterRules rules = FilterRules::Defaults();
  p.vocab = MineKeyphrases(p.corpus.reviews, cfg.keyphrases_per_aspect, rules);
  SplitAssignment split = SplitCorpus(p.corpus.reviews, 20, 0.8);
  PreparedCorpus prepared = PrepareCorpus(p.corpus.reviews, split, p.vocab, rules, 3.0);
  p.tokens = TokenVocab::Build(prepared.user_pool, p.vocab);
  p.data = BuildModelData(prepared, p.tokens, hp.n_just, hp.max_just_len, hp.seed);
  return p;
}

// Initialized (and optionally briefly trained) toy model.
inline ModelBundle BuildToyBundle(const ToyPipeline &p, bool train) {
  Network net(p.hyper, p.data.users.size(), p.data.items.size(), p.tokens.size(),
              KeyphraseTokenIds(p.vocab, p.tokens));
  net.Initialize(p.hyper.seed);
  if (train) Train(net, p.data, {});
  return MakeBundle(std::move(net), p.tokens, p.vocab, p.data);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("critrec_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string path() const { return path_.string(); }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace critrec::testing

#endif  // CRITREC_TESTS_TEST_UTIL_H_
