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

#ifndef CRITREC_MODEL_ENGINE_H_
#define CRITREC_MODEL_ENGINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "critrec/corpus/keyphrases.h"
#include "critrec/model/dataset.h"
#include "critrec/model/mlp_head.h"
#include "critrec/model/network.h"
#include "critrec/model/token_vocab.h"
#include "json.hpp"

namespace critrec {

struct LatentState {
  std::vector<double> z;
  std::string user_id;
  std::string item_id;
  bool edited = false;
};

void to_json(nlohmann::json &j, const LatentState &s);
void from_json(const nlohmann::json &j, LatentState &s);

struct Explanation {
  double rating = 0.0;
  std::vector<double> keyphrase_probs;
  BitVector keyphrase_set;
  TokenSeq justification;
};

struct DecodeOptions {
  int64_t beam_width = 1;  // 1 = greedy
  int64_t max_len = 0;     // 0 = the model's max_just_len
};

struct Recommendation {
  std::string item_id;
  int64_t item_index = 0;
  double score = 0.0;
  Explanation explanation;
};

// Everything a trained model needs at inference time.
struct ModelBundle {
  Network network;
  TokenVocab tokens;
  KeyphraseVocabulary keyphrases;
  EntityTable users;
  EntityTable items;
  std::vector<std::vector<TokenSeq>> user_histories;
  std::vector<std::vector<TokenSeq>> item_histories;
};

// Indices of the m largest values; ties go to the lower index.
BitVector TopMask(const std::vector<double> &values, int64_t m);
std::vector<int64_t> TopIndices(const std::vector<double> &values, int64_t m);

// Read-only inference over a frozen model. Safe to share across threads.
class Engine {
 public:
  explicit Engine(ModelBundle bundle);

  const ModelBundle &bundle() const { return bundle_; }
  const Network &network() const { return bundle_.network; }
  const HyperParams &hyper() const { return bundle_.network.hyper(); }
  int64_t num_keyphrases() const { return bundle_.network.num_keyphrases(); }
  const MlpHead &rating_head() const { return rating_head_; }
  const MlpHead &keyphrase_head() const { return keyphrase_head_; }

  // Throws Error("unknown-entity").
  LatentState Encode(const std::string &user_id, const std::string &item_id) const;
  LatentState EncodeIndex(int64_t user, int64_t item) const;
  const std::vector<double> &UserGamma(int64_t user) const { return user_gamma_.at(user); }
  const std::vector<double> &ItemGamma(int64_t item) const { return item_gamma_.at(item); }

  double PredictRating(const std::vector<double> &z) const;
  std::vector<double> KeyphraseProbs(const std::vector<double> &z) const;
  // Probabilities and the top-m binarization.
  std::pair<std::vector<double>, BitVector> ExplainKeyphrases(const std::vector<double> &z,
                                                              int64_t m) const;
  // Mean shared embedding of the selected keyphrases; zeros when empty.
  std::vector<double> EncodeAspects(const BitVector &set) const;
  TokenSeq GenerateJustification(const std::vector<double> &z, const std::vector<double> &a_kp,
                                 const DecodeOptions &options = {}) const;
  // Rating, keyphrases and (optionally) a justification conditioned on the
  // predicted keyphrase set.
  Explanation Explain(const std::vector<double> &z, int64_t m, bool with_justification,
                      const DecodeOptions &options = {}) const;

  // Sorted by predicted rating, ties by lower item index.
  std::vector<Recommendation> RecommendTopN(const std::string &user_id,
                                            const std::vector<std::string> &candidates,
                                            int64_t n, bool with_justification) const;

  std::vector<std::string> DecodeTokens(const TokenSeq &ids) const {
    return bundle_.tokens.Decode(ids);
  }

 private:
  std::vector<std::vector<double>> ComputeGammas(
      const std::vector<std::vector<TokenSeq>> &histories) const;
  std::vector<std::vector<double>> NextTokenLogProbs(const std::vector<double> &z_tilde,
                                                     const std::vector<TokenSeq> &prefixes) const;

  ModelBundle bundle_;
  MlpHead rating_head_;
  MlpHead keyphrase_head_;
  std::vector<std::vector<double>> user_gamma_;
  std::vector<std::vector<double>> item_gamma_;
};

}  // namespace critrec

#endif  // CRITREC_MODEL_ENGINE_H_
