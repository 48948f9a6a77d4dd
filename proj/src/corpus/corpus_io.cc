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

#include "critrec/corpus/corpus_io.h"

#include <fstream>

#include "critrec/common/error.h"

namespace critrec {

namespace {

constexpr int kFormatVersion = 1;

std::ofstream OpenOut(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write " + path);
  return out;
}

std::ifstream OpenIn(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  return in;
}

void CheckHeader(const std::string &line, const std::string &format, const std::string &path) {
  const auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != format || header.value("version", 0) != kFormatVersion) {
    throw Error("bad-format", path + " is not a " + format + " v" + std::to_string(kFormatVersion) +
                                  " file");
  }
}

}  // namespace

nlohmann::json CorpusSettings::ToJson() const {
  return {{"version", kFormatVersion},
          {"rating_threshold", rating_threshold},
          {"min_interactions", min_interactions},
          {"train_fraction", train_fraction},
          {"keyphrases_per_aspect", keyphrases_per_aspect}};
}

CorpusSettings CorpusSettings::FromJson(const nlohmann::json &j) {
  CorpusSettings s;
  s.rating_threshold = j.value("rating_threshold", s.rating_threshold);
  s.min_interactions = j.value("min_interactions", s.min_interactions);
  s.train_fraction = j.value("train_fraction", s.train_fraction);
  s.keyphrases_per_aspect = j.value("keyphrases_per_aspect", s.keyphrases_per_aspect);
  return s;
}

void WriteReviews(const std::string &path, const std::vector<Review> &reviews) {
  auto out = OpenOut(path);
  out << nlohmann::json{{"format", "critrec-reviews"}, {"version", kFormatVersion}}.dump() << "\n";
  for (const Review &r : reviews) out << nlohmann::json(r).dump() << "\n";
}

std::vector<Review> ReadReviews(const std::string &path) {
  auto in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw Error("bad-format", path + " is empty");
  CheckHeader(line, "critrec-reviews", path);
  std::vector<Review> reviews;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    reviews.push_back(nlohmann::json::parse(line).get<Review>());
  }
  return reviews;
}

void WriteSplit(const std::string &path, const SplitAssignment &split) {
  auto out = OpenOut(path);
  out << nlohmann::json{{"format", "critrec-split"}, {"version", kFormatVersion}}.dump() << "\n";
  for (const auto &[review_id, tag] : split.by_review) {
    out << nlohmann::json{{"review_id", review_id}, {"split", SplitName(tag)}}.dump() << "\n";
  }
}

SplitAssignment ReadSplit(const std::string &path) {
  auto in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw Error("bad-format", path + " is empty");
  CheckHeader(line, "critrec-split", path);
  SplitAssignment split;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto record = nlohmann::json::parse(line);
    split.by_review[record.at("review_id").get<std::string>()] =
        ParseSplit(record.at("split").get<std::string>());
  }
  return split;
}

void WriteJsonFile(const std::string &path, const nlohmann::json &value) {
  auto out = OpenOut(path);
  out << value.dump(1) << "\n";
}

nlohmann::json ReadJsonFile(const std::string &path) {
  auto in = OpenIn(path);
  return nlohmann::json::parse(in);
}

CorpusBundle LoadCorpusDir(const std::string &dir) {
  CorpusPaths paths{dir};
  CorpusBundle bundle;
  bundle.reviews = ReadReviews(paths.reviews());
  bundle.vocabulary = ReadJsonFile(paths.vocabulary()).get<KeyphraseVocabulary>();
  bundle.split = ReadSplit(paths.split());
  bundle.settings = CorpusSettings::FromJson(ReadJsonFile(paths.settings()));
  return bundle;
}

}  // namespace critrec
