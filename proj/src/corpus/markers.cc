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

#include "critrec/corpus/markers.h"

#include "critrec/corpus/text.h"

namespace critrec {

FilterRules FilterRules::Defaults() {
  FilterRules rules;
  rules.pronouns = text::DefaultPronouns();
  rules.stopwords = text::DefaultStopwords();
  rules.min_tokens = 4;
  return rules;
}

std::string_view ReasonCode(RejectReason reason) {
  switch (reason) {
    case RejectReason::kInvalidSpan:
      return "invalid-span";
    case RejectReason::kTooShort:
      return "too-short";
    case RejectReason::kPronoun:
      return "pronoun";
    case RejectReason::kNoContent:
      return "no-content";
  }
  return "unknown";
}

bool IsContentToken(std::string_view token, const FilterRules &rules) {
  const std::string t(token);
  return text::IsAlphabetic(t) && t.size() >= 2 && !rules.stopwords.count(t) &&
         !rules.pronouns.count(t);
}

FilterOutcome FilterMarkers(const Review &review, const FilterRules &rules) {
  FilterOutcome outcome;
  const int64_t n = static_cast<int64_t>(review.tokens.size());
  for (size_t s = 0; s < review.marker_spans.size(); ++s) {
    const MarkerSpan &span = review.marker_spans[s];
    if (span.start < 0 || span.start >= span.end || span.end > n) {
      outcome.rejected.push_back({s, RejectReason::kInvalidSpan});
      continue;
    }
    std::vector<std::string> tokens(review.tokens.begin() + span.start,
                                    review.tokens.begin() + span.end);
    if (tokens.size() < rules.min_tokens) {
      outcome.rejected.push_back({s, RejectReason::kTooShort});
      continue;
    }
    bool pronoun = false, content = false;
    for (const std::string &t : tokens) {
      pronoun = pronoun || rules.pronouns.count(t) > 0;
      content = content || IsContentToken(t, rules);
    }
    if (pronoun) {
      outcome.rejected.push_back({s, RejectReason::kPronoun});
      continue;
    }
    if (!content) {
      outcome.rejected.push_back({s, RejectReason::kNoContent});
      continue;
    }
    outcome.kept.push_back({std::move(tokens), span.aspect, review.review_id});
  }
  return outcome;
}

void to_json(nlohmann::json &j, const Justification &justification) {
  j = nlohmann::json{{"tokens", justification.tokens},
                     {"aspect", justification.aspect},
                     {"source_review", justification.source_review}};
}

void from_json(const nlohmann::json &j, Justification &justification) {
  justification.tokens = j.at("tokens").get<std::vector<std::string>>();
  justification.aspect = j.at("aspect").get<std::string>();
  justification.source_review = j.at("source_review").get<std::string>();
}

}  // namespace critrec
