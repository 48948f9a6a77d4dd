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

#ifndef CRITREC_CORPUS_SYNTHETIC_H_
#define CRITREC_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "critrec/corpus/review.h"

namespace critrec {

struct AspectTemplate {
  std::string name;
  std::vector<std::string> keyphrases;  // lemma-stable nouns
};

struct SyntheticConfig {
  int n_users = 200;
  int n_items = 100;
  int n_aspects = 4;
  int keyphrases_per_aspect = 6;
  int reviews_per_user = 25;
  // Keyphrases that characterize an item within one aspect.
  int traits_per_aspect = 2;
  // Aspects discussed per review, drawn by the user's aspect weights.
  int aspects_per_review = 2;
  double noise = 0.1;
  uint64_t seed = 7;
  std::vector<AspectTemplate> aspects = DefaultAspects();
  std::vector<std::string> positive_words = DefaultPositiveWords();
  std::vector<std::string> negative_words = DefaultNegativeWords();

  int keyphrase_count() const { return n_aspects * keyphrases_per_aspect; }
  // Throws Error("invalid-config") naming the offending field.
  void Validate() const;

  static std::vector<AspectTemplate> DefaultAspects();
  static std::vector<std::string> DefaultPositiveWords();
  static std::vector<std::string> DefaultNegativeWords();
};

void to_json(nlohmann::json &j, const SyntheticConfig &cfg);
// Missing fields keep their defaults.
void from_json(const nlohmann::json &j, SyntheticConfig &cfg);

struct SyntheticCorpus {
  std::vector<Review> reviews;
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  std::vector<std::string> aspects;
  // Ground truth: inner product of user aspect weights and item aspect
  // qualities, [n_users][n_items]; ratings are 3 + 2 * preference + noise.
  std::vector<std::vector<double>> preference;
  std::vector<std::vector<double>> user_weights;
  std::vector<std::vector<double>> item_quality;
  // item_traits[i][a]: keyphrases describing item i within aspect a.
  std::vector<std::vector<std::vector<std::string>>> item_traits;

  nlohmann::json GroundTruthJson() const;
};

// Users weigh aspects, items have per-aspect quality in [-1, 1] and a few
// trait keyphrases per aspect. Each review discusses aspects the user cares
// about: liked aspects name the item's traits, disliked ones mostly complain
// in generic words. Marker spans cover those segments; a few deliberately
// short or first-person markers are mixed in.
SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig &cfg);

}  // namespace critrec

#endif  // CRITREC_CORPUS_SYNTHETIC_H_
