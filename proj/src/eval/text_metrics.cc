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

#include "critrec/eval/text_metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "critrec/common/error.h"
#include "critrec/corpus/text.h"

namespace critrec {

void to_json(nlohmann::json &j, const TextOverlap &t) {
  j = nlohmann::json{{"bleu1", t.bleu[0]}, {"bleu2", t.bleu[1]}, {"bleu3", t.bleu[2]},
                     {"bleu4", t.bleu[3]}, {"rouge_l", t.rouge_l}};
}

namespace {

using NGramCounts = std::map<std::vector<std::string>, int>;

NGramCounts CountNGrams(const std::vector<std::string> &tokens, size_t n) {
  NGramCounts counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

size_t Lcs(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

TextOverlap ComputeTextOverlap(const std::vector<std::string> &candidate,
                               const std::vector<std::vector<std::string>> &references) {
  if (references.empty()) throw Error("invalid-input", "text overlap needs a reference");
  TextOverlap out;
  if (candidate.empty()) return out;

  // Closest reference length; ties prefer the shorter reference.
  size_t ref_len = references.front().size();
  for (const auto &ref : references) {
    const auto dist = [&](size_t len) {
      return std::abs(static_cast<long>(len) - static_cast<long>(candidate.size()));
    };
    if (dist(ref.size()) < dist(ref_len) ||
        (dist(ref.size()) == dist(ref_len) && ref.size() < ref_len)) {
      ref_len = ref.size();
    }
  }
  const double c = static_cast<double>(candidate.size());
  const double bp = c >= static_cast<double>(ref_len) ? 1.0 : std::exp(1.0 - ref_len / c);

  std::array<double, 4> log_precision{};
  std::array<bool, 4> defined{};
  for (size_t n = 1; n <= 4; ++n) {
    NGramCounts cand = CountNGrams(candidate, n);
    if (cand.empty()) continue;
    NGramCounts max_ref;
    for (const auto &ref : references) {
      for (const auto &[gram, count] : CountNGrams(ref, n)) {
        max_ref[gram] = std::max(max_ref[gram], count);
      }
    }
    int clipped = 0, total = 0;
    for (const auto &[gram, count] : cand) {
      auto it = max_ref.find(gram);
      clipped += std::min(count, it == max_ref.end() ? 0 : it->second);
      total += count;
    }
    defined[n - 1] = true;
    log_precision[n - 1] = clipped == 0 ? -std::numeric_limits<double>::infinity()
                                        : std::log(static_cast<double>(clipped) / total);
  }
  for (size_t n = 1; n <= 4; ++n) {
    double sum = 0.0;
    int orders = 0;
    for (size_t k = 0; k < n; ++k) {
      if (!defined[k]) continue;
      sum += log_precision[k];
      ++orders;
    }
    out.bleu[n - 1] = orders == 0 ? 0.0 : 100.0 * bp * std::exp(sum / orders);
  }

  for (const auto &ref : references) {
    if (ref.empty()) continue;
    const double lcs = static_cast<double>(Lcs(candidate, ref));
    if (lcs == 0.0) continue;
    const double p = lcs / c;
    const double r = lcs / static_cast<double>(ref.size());
    out.rouge_l = std::max(out.rouge_l, 100.0 * 2.0 * p * r / (p + r));
  }
  return out;
}

double RKw(const std::vector<std::string> &generated, const std::vector<std::string> &targets) {
  if (targets.empty()) throw Error("invalid-input", "r_kw needs target keyphrases");
  std::set<std::string> lemmas;
  for (const std::string &t : generated) lemmas.insert(text::Lemmatize(t));
  std::set<std::string> wanted(targets.begin(), targets.end());
  size_t present = 0;
  for (const std::string &k : wanted) present += lemmas.count(text::Lemmatize(k));
  return static_cast<double>(present) / static_cast<double>(wanted.size());
}

}  // namespace critrec
