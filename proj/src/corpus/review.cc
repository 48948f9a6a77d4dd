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

#include "critrec/corpus/review.h"

#include "critrec/common/error.h"

namespace critrec {

void ValidateReview(const Review &review) {
  auto in_range = [](double r) { return r >= 1.0 && r <= 5.0; };
  if (!in_range(review.overall_rating)) {
    throw Error("invalid-review", review.review_id + ": overall rating outside [1,5]");
  }
  for (const auto &[aspect, rating] : review.aspect_ratings) {
    if (!in_range(rating)) {
      throw Error("invalid-review", review.review_id + ": " + aspect + " rating outside [1,5]");
    }
  }
  for (const MarkerSpan &span : review.marker_spans) {
    if (!review.aspect_ratings.count(span.aspect)) {
      throw Error("invalid-review", review.review_id + ": marker aspect " + span.aspect +
                                        " has no rating");
    }
  }
}

void to_json(nlohmann::json &j, const MarkerSpan &span) {
  j = nlohmann::json::array({span.aspect, span.start, span.end});
}

void from_json(const nlohmann::json &j, MarkerSpan &span) {
  span.aspect = j.at(0).get<std::string>();
  span.start = j.at(1).get<int64_t>();
  span.end = j.at(2).get<int64_t>();
}

void to_json(nlohmann::json &j, const Review &review) {
  j = nlohmann::json{{"review_id", review.review_id},
                     {"user_id", review.user_id},
                     {"item_id", review.item_id},
                     {"timestamp", review.timestamp},
                     {"overall_rating", review.overall_rating},
                     {"aspect_ratings", review.aspect_ratings},
                     {"tokens", review.tokens},
                     {"marker_spans", review.marker_spans}};
}

void from_json(const nlohmann::json &j, Review &review) {
  review.review_id = j.at("review_id").get<std::string>();
  review.user_id = j.at("user_id").get<std::string>();
  review.item_id = j.at("item_id").get<std::string>();
  review.timestamp = j.at("timestamp").get<int64_t>();
  review.overall_rating = j.at("overall_rating").get<double>();
  review.aspect_ratings = j.at("aspect_ratings").get<std::map<std::string, double>>();
  review.tokens = j.at("tokens").get<std::vector<std::string>>();
  review.marker_spans = j.at("marker_spans").get<std::vector<MarkerSpan>>();
}

}  // namespace critrec
