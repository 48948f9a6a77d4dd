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

#ifndef CRITREC_CORPUS_CORPUS_IO_H_
#define CRITREC_CORPUS_CORPUS_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "critrec/corpus/keyphrases.h"
#include "critrec/corpus/review.h"
#include "critrec/corpus/split.h"

namespace critrec {

// Processing settings stored next to a corpus (corpus.json).
struct CorpusSettings {
  double rating_threshold = 3.0;
  size_t min_interactions = 20;
  double train_fraction = 0.8;
  size_t keyphrases_per_aspect = 6;

  nlohmann::json ToJson() const;
  static CorpusSettings FromJson(const nlohmann::json &j);
};

// Line-delimited files start with a header record {"format", "version"}.
void WriteReviews(const std::string &path, const std::vector<Review> &reviews);
std::vector<Review> ReadReviews(const std::string &path);
void WriteSplit(const std::string &path, const SplitAssignment &split);
SplitAssignment ReadSplit(const std::string &path);
void WriteJsonFile(const std::string &path, const nlohmann::json &value);
nlohmann::json ReadJsonFile(const std::string &path);

// Standard file names inside a corpus directory.
struct CorpusPaths {
  std::string dir;
  std::string reviews() const { return dir + "/reviews.jsonl"; }
  std::string vocabulary() const { return dir + "/keyphrases.json"; }
  std::string split() const { return dir + "/split.jsonl"; }
  std::string settings() const { return dir + "/corpus.json"; }
  std::string ground_truth() const { return dir + "/ground_truth.json"; }
};

struct CorpusBundle {
  std::vector<Review> reviews;
  KeyphraseVocabulary vocabulary;
  SplitAssignment split;
  CorpusSettings settings;
};

CorpusBundle LoadCorpusDir(const std::string &dir);

}  // namespace critrec

#endif  // CRITREC_CORPUS_CORPUS_IO_H_
