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

#ifndef CRITREC_CORPUS_REVIEW_H_
#define CRITREC_CORPUS_REVIEW_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace critrec {

// [start, end) token range that justifies one aspect's sub-rating.
struct MarkerSpan {
  std::string aspect;
  int64_t start = 0;
  int64_t end = 0;

  bool operator==(const MarkerSpan &) const = default;
};

struct Review {
  std::string review_id;
  std::string user_id;
  std::string item_id;
  int64_t timestamp = 0;
  double overall_rating = 0.0;
  std::map<std::string, double> aspect_ratings;
  std::vector<std::string> tokens;
  std::vector<MarkerSpan> marker_spans;

  bool operator==(const Review &) const = default;
};

// Throws Error("invalid-review") when ratings leave [1, 5] or a marker names
// an aspect without a rating. Out-of-range spans are tolerated here; the
// marker filter rejects them individually.
void ValidateReview(const Review &review);

void to_json(nlohmann::json &j, const MarkerSpan &span);
void from_json(const nlohmann::json &j, MarkerSpan &span);
void to_json(nlohmann::json &j, const Review &review);
void from_json(const nlohmann::json &j, Review &review);

}  // namespace critrec

#endif  // CRITREC_CORPUS_REVIEW_H_
