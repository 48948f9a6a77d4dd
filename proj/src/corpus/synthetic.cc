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

#include "critrec/corpus/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "critrec/common/error.h"
#include "critrec/common/rng.h"
#include "critrec/corpus/text.h"

namespace critrec {

std::vector<AspectTemplate> SyntheticConfig::DefaultAspects() {
  return {
      {"location",
       {"airport", "downtown", "beach", "station", "metro", "shop", "restaurant", "park",
        "museum", "harbor", "market", "center"}},
      {"room",
       {"bed", "view", "balcony", "window", "suite", "size", "furniture", "minibar", "closet",
        "lamp", "tv", "mattress"}},
      {"service",
       {"staff", "reception", "concierge", "breakfast", "waiter", "manager", "bartender", "valet",
        "doorman", "chef", "porter", "shuttle"}},
      {"value",
       {"price", "deal", "rate", "cost", "fee", "discount", "budget", "bargain", "money", "wifi",
        "upgrade", "tax"}},
      {"cleanliness",
       {"bathroom", "carpet", "towel", "sheet", "shower", "floor", "linen", "pillow", "toilet",
        "sink", "mirror", "tile"}},
  };
}

std::vector<std::string> SyntheticConfig::DefaultPositiveWords() {
  return {"great",   "excellent", "wonderful", "lovely",   "superb",   "amazing",
          "fantastic", "perfect", "pleasant",  "spotless", "friendly", "charming"};
}

std::vector<std::string> SyntheticConfig::DefaultNegativeWords() {
  return {"awful", "terrible", "dirty",    "noisy",    "poor",  "disappointing",
          "bad",   "mediocre", "horrible", "rude",     "shabby", "overpriced"};
}

void SyntheticConfig::Validate() const {
  auto require = [](bool ok, const char *field, const std::string &why) {
    if (!ok) throw Error("invalid-config", std::string(field) + ": " + why);
  };
  require(n_users > 0, "n_users", "must be positive");
  require(n_items > 0, "n_items", "must be positive");
  require(n_aspects > 0, "n_aspects", "must be positive");
  require(n_aspects <= static_cast<int>(aspects.size()), "n_aspects",
          "only " + std::to_string(aspects.size()) + " aspect templates available");
  require(keyphrases_per_aspect > 0, "keyphrases_per_aspect", "must be positive");
  for (int a = 0; a < n_aspects; ++a) {
    require(keyphrases_per_aspect <= static_cast<int>(aspects[a].keyphrases.size()),
            "keyphrases_per_aspect", "aspect " + aspects[a].name + " has too few keyphrases");
  }
  require(reviews_per_user > 0, "reviews_per_user", "must be positive");
  require(reviews_per_user <= n_items, "reviews_per_user", "exceeds n_items");
  require(traits_per_aspect > 0 && traits_per_aspect <= keyphrases_per_aspect,
          "traits_per_aspect", "must lie in [1, keyphrases_per_aspect]");
  require(aspects_per_review > 0 && aspects_per_review <= n_aspects, "aspects_per_review",
          "must lie in [1, n_aspects]");
  require(noise >= 0.0 && noise <= 1.0, "noise", "must lie in [0, 1]");
  require(!positive_words.empty(), "positive_words", "must be nonempty");
  require(!negative_words.empty(), "negative_words", "must be nonempty");
}

void to_json(nlohmann::json &j, const SyntheticConfig &cfg) {
  nlohmann::json aspects = nlohmann::json::array();
  for (const AspectTemplate &a : cfg.aspects) {
    aspects.push_back({{"name", a.name}, {"keyphrases", a.keyphrases}});
  }
  j = nlohmann::json{{"n_users", cfg.n_users},
                     {"n_items", cfg.n_items},
                     {"n_aspects", cfg.n_aspects},
                     {"keyphrases_per_aspect", cfg.keyphrases_per_aspect},
                     {"reviews_per_user", cfg.reviews_per_user},
                     {"traits_per_aspect", cfg.traits_per_aspect},
                     {"aspects_per_review", cfg.aspects_per_review},
                     {"noise", cfg.noise},
                     {"seed", cfg.seed},
                     {"aspects", aspects},
                     {"positive_words", cfg.positive_words},
                     {"negative_words", cfg.negative_words}};
}

void from_json(const nlohmann::json &j, SyntheticConfig &cfg) {
  auto read = [&j](const char *key, auto &field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception &) {
      throw Error("invalid-config", std::string(key) + ": wrong type");
    }
  };
  read("n_users", cfg.n_users);
  read("n_items", cfg.n_items);
  read("n_aspects", cfg.n_aspects);
  read("keyphrases_per_aspect", cfg.keyphrases_per_aspect);
  read("reviews_per_user", cfg.reviews_per_user);
  read("traits_per_aspect", cfg.traits_per_aspect);
  read("aspects_per_review", cfg.aspects_per_review);
  read("noise", cfg.noise);
  read("seed", cfg.seed);
  read("positive_words", cfg.positive_words);
  read("negative_words", cfg.negative_words);
  if (j.contains("aspects")) {
    cfg.aspects.clear();
    for (const auto &a : j.at("aspects")) {
      cfg.aspects.push_back(
          {a.at("name").get<std::string>(), a.at("keyphrases").get<std::vector<std::string>>()});
    }
  }
}

namespace {

std::string Pluralize(const std::string &word) {
  const auto ends = [&word](const char *s) {
    const std::string suffix(s);
    return word.size() >= suffix.size() && word.substr(word.size() - suffix.size()) == suffix;
  };
  if (ends("s") || ends("x") || ends("ch") || ends("sh")) return word + "es";
  if (ends("y") && word.size() > 1 && std::string("aeiou").find(word[word.size() - 2]) == std::string::npos) {
    return word.substr(0, word.size() - 1) + "ies";
  }
  return word + "s";
}

// Mention a keyphrase, sometimes in plural form when that form lemmatizes back.
std::string Surface(const std::string &keyphrase, Rng &rng) {
  if (rng.Bernoulli(0.15)) {
    const std::string plural = Pluralize(keyphrase);
    if (text::Lemmatize(plural) == keyphrase) return plural;
  }
  return keyphrase;
}

std::string Id(char prefix, int64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*lld", prefix, width, static_cast<long long>(value));
  return buf;
}

const std::vector<std::string> kPositiveAdverbs = {"really", "very", "quite", "truly", "absolutely"};
const std::vector<std::string> kNegativeAdverbs = {"rather", "somewhat", "fairly", "pretty", "quite"};
const std::vector<std::string> kFiller = {"nice", "decent", "memorable", "short", "long", "busy"};

template <typename T>
const T &Pick(const std::vector<T> &values, Rng &rng) {
  return values[rng.Index(values.size())];
}

}  // namespace

nlohmann::json SyntheticCorpus::GroundTruthJson() const {
  return nlohmann::json{{"version", 1},
                        {"user_ids", user_ids},
                        {"item_ids", item_ids},
                        {"aspects", aspects},
                        {"preference", preference},
                        {"user_weights", user_weights},
                        {"item_quality", item_quality},
                        {"item_traits", item_traits}};
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig &cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  SyntheticCorpus out;
  const int n_aspects = cfg.n_aspects;
  for (int a = 0; a < n_aspects; ++a) out.aspects.push_back(cfg.aspects[a].name);
  for (int u = 0; u < cfg.n_users; ++u) out.user_ids.push_back(Id('u', u, 4));
  for (int i = 0; i < cfg.n_items; ++i) out.item_ids.push_back(Id('i', i, 4));

  out.user_weights.assign(cfg.n_users, std::vector<double>(n_aspects));
  for (auto &w : out.user_weights) {
    double total = 0.0;
    for (double &x : w) {
      x = std::exp(1.5 * rng.Normal());
      total += x;
    }
    for (double &x : w) x /= total;
  }
  out.item_quality.assign(cfg.n_items, std::vector<double>(n_aspects));
  out.item_traits.assign(cfg.n_items, std::vector<std::vector<std::string>>(n_aspects));
  for (int i = 0; i < cfg.n_items; ++i) {
    for (int a = 0; a < n_aspects; ++a) {
      out.item_quality[i][a] = rng.Uniform(-1.0, 1.0);
      for (size_t k : rng.SampleWithoutReplacement(cfg.keyphrases_per_aspect, cfg.traits_per_aspect)) {
        out.item_traits[i][a].push_back(cfg.aspects[a].keyphrases[k]);
      }
    }
  }
  out.preference.assign(cfg.n_users, std::vector<double>(cfg.n_items));
  for (int u = 0; u < cfg.n_users; ++u)
    for (int i = 0; i < cfg.n_items; ++i) {
      double s = 0.0;
      for (int a = 0; a < n_aspects; ++a) s += out.user_weights[u][a] * out.item_quality[i][a];
      out.preference[u][i] = s;
    }

  auto clamp_rating = [](double r) { return std::clamp(r, 1.0, 5.0); };
  int64_t review_counter = 0;
  for (int u = 0; u < cfg.n_users; ++u) {
    const auto &weights = out.user_weights[u];
    int64_t clock = 1'500'000'000 + static_cast<int64_t>(rng.Index(86'400 * 30));
    for (size_t item : rng.SampleWithoutReplacement(cfg.n_items, cfg.reviews_per_user)) {
      clock += 3'600 + static_cast<int64_t>(rng.Index(86'400 * 10));
      Review review;
      review.review_id = Id('r', review_counter++, 6);
      review.user_id = out.user_ids[u];
      review.item_id = out.item_ids[item];
      review.timestamp = clock;
      const auto &quality = out.item_quality[item];
      review.overall_rating =
          clamp_rating(3.0 + 2.0 * out.preference[u][item] + 2.0 * cfg.noise * rng.Normal());
      for (int a = 0; a < n_aspects; ++a) {
        review.aspect_ratings[out.aspects[a]] =
            clamp_rating(3.0 + 2.0 * quality[a] + 2.0 * cfg.noise * rng.Normal());
      }

      // Aspects to discuss, drawn without replacement by the user's weights.
      std::vector<int> discussed;
      std::vector<double> remaining = weights;
      for (int k = 0; k < cfg.aspects_per_review; ++k) {
        double total = 0.0;
        for (double w : remaining) total += w;
        double draw = rng.Uniform() * total;
        int chosen = 0;
        for (int a = 0; a < n_aspects; ++a) {
          if (remaining[a] <= 0.0) continue;
          chosen = a;
          draw -= remaining[a];
          if (draw < 0.0) break;
        }
        discussed.push_back(chosen);
        remaining[chosen] = 0.0;
      }

      auto emit = [&review](const std::vector<std::string> &words, const std::string &aspect) {
        const int64_t start = static_cast<int64_t>(review.tokens.size());
        review.tokens.insert(review.tokens.end(), words.begin(), words.end());
        if (!aspect.empty()) {
          review.marker_spans.push_back({aspect, start, static_cast<int64_t>(review.tokens.size())});
        }
        review.tokens.push_back(".");
      };
      auto trait = [&](int a) -> std::string {
        if (rng.Bernoulli(cfg.noise)) {
          return cfg.aspects[a].keyphrases[rng.Index(cfg.keyphrases_per_aspect)];
        }
        return Pick(out.item_traits[item][a], rng);
      };

      for (int a : discussed) {
        const std::string &aspect = out.aspects[a];
        const bool liked = quality[a] + cfg.noise * rng.Normal() > 0.0;
        if (liked) {
          const std::string first = trait(a);
          std::string second = trait(a);
          const std::string adverb = Pick(kPositiveAdverbs, rng);
          const std::string adjective = Pick(cfg.positive_words, rng);
          if (second != first && rng.Bernoulli(0.5)) {
            emit({"the", Surface(first, rng), "and", "the", Surface(second, rng), "were", adverb,
                  adjective},
                 aspect);
          } else {
            emit({"the", Surface(first, rng), "was", adverb, adjective}, aspect);
          }
          if (rng.Bernoulli(0.15)) emit({Pick(cfg.positive_words, rng), first}, aspect);
          if (rng.Bernoulli(0.1)) emit({"we", "loved", "the", first, "here"}, aspect);
        } else {
          const std::string adverb = Pick(kNegativeAdverbs, rng);
          const std::string adjective = Pick(cfg.negative_words, rng);
          if (rng.Bernoulli(0.3)) {
            emit({"the", Surface(trait(a), rng), "was", adverb, adjective}, aspect);
          } else {
            emit({"everything", "there", "was", adverb, adjective}, aspect);
          }
        }
      }
      emit({"overall", "a", Pick(kFiller, rng), "stay"}, "");
      out.reviews.push_back(std::move(review));
    }
  }
  return out;
}

}  // namespace critrec
