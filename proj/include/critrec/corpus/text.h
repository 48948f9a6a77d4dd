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

#ifndef CRITREC_CORPUS_TEXT_H_
#define CRITREC_CORPUS_TEXT_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace critrec::text {

// Lowercases and splits on whitespace; every punctuation character becomes
// its own token.
std::vector<std::string> Tokenize(std::string_view input);

std::string Join(const std::vector<std::string> &tokens);

bool IsPunctuation(std::string_view token);
bool IsAlphabetic(std::string_view token);

// Suffix-stripping lemmatizer: an exception table first, then plural
// (-ies, -es, -s), gerund (-ing) and past (-ed) rules with length guards.
std::string Lemmatize(std::string_view word);

const std::set<std::string> &DefaultPronouns();
const std::set<std::string> &DefaultStopwords();

}  // namespace critrec::text

#endif  // CRITREC_CORPUS_TEXT_H_
