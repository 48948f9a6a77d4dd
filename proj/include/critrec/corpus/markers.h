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

#ifndef CRITREC_CORPUS_MARKERS_H_
#define CRITREC_CORPUS_MARKERS_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "critrec/corpus/review.h"

namespace critrec {

struct Justification {
  std::vector<std::string> tokens;
  std::string aspect;
  std::string source_review;

  bool operator==(const Justification &) const = default;
};

// Markers must be long enough, pronoun-free, and carry at least one token
// outside the stopword list (a stand-in for phrase-level parsing).
struct FilterRules {
  std::set<std::string> pronouns;
  std::set<std::string> stopwords;
  size_t min_tokens = 4;

  static FilterRules Defaults();
};

enum class RejectReason { kInvalidSpan, kTooShort, kPronoun, kNoContent };

std::string_view ReasonCode(RejectReason reason);

struct RejectedSpan {
  size_t span_index;
  RejectReason reason;
};

struct FilterOutcome {
  std::vector<Justification> kept;  // in span order
  std::vector<RejectedSpan> rejected;
};

FilterOutcome FilterMarkers(const Review &review, const FilterRules &rules);

// True when `token` would count as a content word under `rules`.
bool IsContentToken(std::string_view token, const FilterRules &rules);

void to_json(nlohmann::json &j, const Justification &justification);
void from_json(const nlohmann::json &j, Justification &justification);

}  // namespace critrec

#endif  // CRITREC_CORPUS_MARKERS_H_
