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

#include "critrec/corpus/text.h"

#include <cctype>
#include <map>

namespace critrec::text {

namespace {

bool IsVowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// "stopp" -> "stop", but "fall" and "pass" keep their doubled letter.
std::string Undouble(std::string stem) {
  const size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !IsVowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

const std::map<std::string, std::string, std::less<>> &Exceptions() {
  static const auto *table = new std::map<std::string, std::string, std::less<>>{
      {"was", "be"},         {"were", "be"},         {"is", "be"},
      {"are", "be"},         {"been", "be"},         {"am", "be"},
      {"has", "have"},       {"had", "have"},        {"does", "do"},
      {"did", "do"},         {"children", "child"},  {"men", "man"},
      {"women", "woman"},    {"people", "person"},   {"feet", "foot"},
      {"teeth", "tooth"},    {"mice", "mouse"},      {"bus", "bus"},
      {"buses", "bus"},      {"glass", "glass"},     {"news", "news"},
      {"series", "series"},  {"species", "species"}, {"ceiling", "ceiling"},
      {"building", "building"}, {"morning", "morning"}, {"evening", "evening"},
      {"parking", "parking"},   {"wedding", "wedding"}, {"housekeeping", "housekeeping"},
      {"thing", "thing"},    {"things", "thing"},    {"nothing", "nothing"},
      {"something", "something"}, {"everything", "everything"}, {"anything", "anything"},
      {"during", "during"},  {"spring", "spring"},   {"string", "string"},
      {"hundred", "hundred"}, {"sacred", "sacred"},  {"wicked", "wicked"},
      {"naked", "naked"},    {"this", "this"},       {"its", "its"},
      {"minibus", "minibus"}, {"always", "always"},
      {"perhaps", "perhaps"}, {"whereas", "whereas"}, {"lens", "lens"},
  };
  return *table;
}

}  // namespace

bool IsPunctuation(std::string_view token) {
  return token.size() == 1 && std::ispunct(static_cast<unsigned char>(token[0]));
}

bool IsAlphabetic(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> Tokenize(std::string_view input) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : input) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

std::string Join(const std::vector<std::string> &tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string Lemmatize(std::string_view word) {
  if (auto it = Exceptions().find(word); it != Exceptions().end()) return it->second;
  std::string w(word);
  if (w.size() <= 3 || !IsAlphabetic(w)) return w;
  if (EndsWith(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (EndsWith(w, "sses")) return w.substr(0, w.size() - 2);
  if (EndsWith(w, "es")) {
    const std::string stem = w.substr(0, w.size() - 2);
    if (EndsWith(stem, "x") || EndsWith(stem, "z") || EndsWith(stem, "ch") ||
        EndsWith(stem, "sh")) {
      return stem;
    }
  }
  if (EndsWith(w, "s") && !EndsWith(w, "ss") && !EndsWith(w, "us") && !EndsWith(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  if (EndsWith(w, "ing") && w.size() >= 6) {
    return Undouble(w.substr(0, w.size() - 3));
  }
  if (EndsWith(w, "ed") && w.size() >= 5 && !EndsWith(w, "eed")) {
    return Undouble(w.substr(0, w.size() - 2));
  }
  return w;
}

const std::set<std::string> &DefaultPronouns() {
  static const auto *pronouns = new std::set<std::string>{
      "i", "me", "my", "mine", "we", "us", "our", "he", "she", "him", "her", "his", "hers",
      "they", "them", "their"};
  return *pronouns;
}

const std::set<std::string> &DefaultStopwords() {
  static const auto *stopwords = new std::set<std::string>{
      "a",      "about",  "above",   "after",   "again",  "all",     "also",    "an",
      "and",    "any",    "are",     "as",      "at",     "be",      "because", "been",
      "before", "being",  "below",   "between", "both",   "but",     "by",      "can",
      "could",  "did",    "do",      "does",    "doing",  "down",    "during",  "each",
      "even",   "every",  "everything", "few",  "for",    "from",    "further", "had",
      "has",    "have",   "having",  "here",    "how",    "if",      "in",      "into",
      "is",     "it",     "its",     "itself",  "just",   "more",    "most",    "much",
      "no",     "nor",    "not",     "now",     "of",     "off",     "on",      "once",
      "only",   "or",     "other",   "out",     "over",   "overall", "own",     "quite",
      "rather", "really", "same",    "so",      "some",   "still",   "such",    "than",
      "that",   "the",    "then",    "there",   "these",  "this",    "those",   "through",
      "to",     "too",    "truly",   "under",   "until",  "up",      "very",    "was",
      "were",   "what",   "when",    "where",   "which",  "while",   "who",     "whom",
      "why",    "will",   "with",    "would",   "yet",    "you",     "your",    "somewhat",
      "fairly", "pretty", "simply",  "absolutely"};
  return *stopwords;
}

}  // namespace critrec::text
