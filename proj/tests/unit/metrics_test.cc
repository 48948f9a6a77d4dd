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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "critrec/common/error.h"
#include "critrec/common/rng.h"
#include "critrec/eval/preference.h"
#include "critrec/eval/ranking_metrics.h"
#include "critrec/eval/text_metrics.h"

namespace critrec {
namespace {

// Textbook definitions evaluated position by position.
RankingMetrics BruteForce(const std::vector<int64_t> &ranked, const std::set<int64_t> &rel,
                          int64_t n) {
  double dcg = 0, idcg = 0, ap = 0;
  int64_t hits = 0;
  const int64_t depth = std::min<int64_t>(n, static_cast<int64_t>(ranked.size()));
  for (int64_t pos = 0; pos < depth; ++pos) {
    if (rel.count(ranked[pos])) {
      ++hits;
      dcg += 1.0 / std::log2(pos + 2.0);
      ap += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  const int64_t ideal = std::min<int64_t>(n, static_cast<int64_t>(rel.size()));
  for (int64_t pos = 0; pos < ideal; ++pos) idcg += 1.0 / std::log2(pos + 2.0);
  return {dcg / idcg, ap / static_cast<double>(ideal),
          static_cast<double>(hits) / static_cast<double>(n),
          static_cast<double>(hits) / static_cast<double>(rel.size())};
}

TEST(RankingMetrics, ExhaustiveAgreementWithBruteForce) {
  int64_t instances = 0;
  for (int64_t size = 1; size <= 6; ++size) {
    std::vector<int64_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int64_t mask = 1; mask < (1 << size); ++mask) {
        std::set<int64_t> rel;
        for (int64_t b = 0; b < size; ++b) {
          if (mask & (1 << b)) rel.insert(b);
        }
        for (int64_t n = 1; n <= size + 1; ++n) {
          const RankingMetrics got = ComputeRankingMetrics(perm, rel, n);
          const RankingMetrics want = BruteForce(perm, rel, n);
          ASSERT_DOUBLE_EQ(got.ndcg, want.ndcg);
          ASSERT_DOUBLE_EQ(got.map, want.map);
          ASSERT_DOUBLE_EQ(got.precision, want.precision);
          ASSERT_DOUBLE_EQ(got.recall, want.recall);
          for (double v : {got.ndcg, got.map, got.precision, got.recall}) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
          }
          ++instances;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  EXPECT_GT(instances, 300000);
}

TEST(RankingMetrics, ClosedForms) {
  RankingMetrics top = ComputeRankingMetrics({3, 1, 2}, {3, 1}, 2);
  EXPECT_DOUBLE_EQ(top.ndcg, 1.0);
  EXPECT_DOUBLE_EQ(top.map, 1.0);
  EXPECT_DOUBLE_EQ(top.precision, 1.0);
  EXPECT_DOUBLE_EQ(top.recall, 1.0);
  EXPECT_NEAR(ComputeRankingMetrics({0, 1}, {1}, 2).ndcg, 1.0 / std::log2(3.0), 1e-12);
  EXPECT_NEAR(ComputeRankingMetrics({0, 1}, {1}, 2).ndcg, 0.6309, 1e-4);
}

TEST(RankingMetrics, Errors) {
  EXPECT_THROW(ComputeRankingMetrics({1, 2}, {}, 2), Error);
  EXPECT_THROW(ComputeRankingMetrics({1, 2}, {1}, 0), Error);
}

TEST(RankingMetrics, RankByScoreKeepsLowerPositionOnTies) {
  EXPECT_EQ(RankByScore({0.5, 0.9, 0.5, 0.1}), (std::vector<int64_t>{1, 0, 2, 3}));
}

TEST(FMap, SignContract) {
  std::vector<int64_t> before(10);
  std::iota(before.begin(), before.end(), 0);
  EXPECT_DOUBLE_EQ(FMap(before, before, {0, 1}, 10), 0.0);
  // Affected items 0 and 1 move from ranks 1,2 to ranks 9,10.
  std::vector<int64_t> after = {2, 3, 4, 5, 6, 7, 8, 9, 0, 1};
  const double direct = 1.0 - (1.0 / 9.0 + 2.0 / 10.0) / 2.0;
  EXPECT_NEAR(FMap(before, after, {0, 1}, 10), direct, 1e-12);
  EXPECT_LT(FMap(after, before, {0, 1}, 10), 0.0);
  EXPECT_THROW(FMap(before, after, {}, 10), Error);
}

TEST(Kendall, IdentityAndReversal) {
  std::vector<PreferencePair> same, reversed;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      same.push_back({double(i), double(j), 0.1 * i, 0.1 * j});
      reversed.push_back({double(i), double(j), -0.1 * i, -0.1 * j});
    }
  }
  EXPECT_DOUBLE_EQ(KendallTauDelta(same, 0), 1.0);
  EXPECT_DOUBLE_EQ(KendallTauDelta(reversed, 0), -1.0);
}

TEST(Kendall, HandEnumerationWithDeltaFilter) {
  // Pairs 2 and 4 have |delta| < 2 and drop out.
  std::vector<PreferencePair> pairs = {
      {5, 1, 0.9, 0.2},  // delta 4, concordant
      {4, 3, 0.1, 0.8},  // delta 1, filtered
      {1, 4, 0.7, 0.3},  // delta 3, discordant
      {2, 3, 0.5, 0.5},  // delta 1, filtered
      {5, 2, 0.6, 0.6},  // delta 3, tie: half discordant
  };
  // (1 - 1.5) / 3
  EXPECT_DOUBLE_EQ(KendallTauDelta(pairs, 2.0), -0.5 / 3.0);
  EXPECT_THROW(KendallTauDelta(pairs, 10.0), Error);
}

TEST(Kendall, DirectEnumerationOnRandomPairs) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PreferencePair> pairs;
    for (int p = 0; p < 30; ++p) {
      pairs.push_back({double(1 + rng.Index(5)), double(1 + rng.Index(5)), rng.Uniform(),
                       rng.Uniform()});
    }
    const double delta = double(rng.Index(3));
    double c = 0, d = 0;
    int total = 0;
    for (const PreferencePair &p : pairs) {
      if (p.rating_i == p.rating_j || std::abs(p.rating_i - p.rating_j) < delta) continue;
      ++total;
      const bool true_i = p.rating_i > p.rating_j;
      if (p.score_i == p.score_j) {
        d += 0.5;
      } else if ((p.score_i > p.score_j) == true_i) {
        c += 1;
      } else {
        d += 1;
      }
    }
    if (total == 0) continue;
    EXPECT_DOUBLE_EQ(KendallTauDelta(pairs, delta), (c - d) / total);
    // Without score ties, reversing all scores negates the value.
    std::vector<PreferencePair> flipped = pairs;
    for (PreferencePair &p : flipped) {
      p.score_i = -p.score_i;
      p.score_j = -p.score_j;
    }
    EXPECT_DOUBLE_EQ(KendallTauDelta(flipped, delta), -KendallTauDelta(pairs, delta));
  }
}

TEST(Bws, MarkersRow) {
  EXPECT_DOUBLE_EQ(BwsScore({75, 1, 100}), 0.74);
  EXPECT_DOUBLE_EQ(BwsScore({10, 0, 10}), 1.0);
  EXPECT_DOUBLE_EQ(BwsScore({4, 4, 10}), 0.0);
  EXPECT_THROW(BwsScore({6, 6, 10}), Error);
  EXPECT_THROW(BwsScore({0, 0, 0}), Error);
}

std::vector<std::string> Words(std::initializer_list<const char *> w) {
  return std::vector<std::string>(w.begin(), w.end());
}

TEST(TextOverlap, IdenticalAndDisjoint) {
  const auto c = Words({"the", "room", "was", "clean", "and", "quiet"});
  TextOverlap same = ComputeTextOverlap(c, {c});
  for (double b : same.bleu) EXPECT_NEAR(b, 100.0, 1e-9);
  EXPECT_NEAR(same.rouge_l, 100.0, 1e-9);
  TextOverlap none = ComputeTextOverlap(c, {Words({"great", "beer", "head"})});
  for (double b : none.bleu) EXPECT_DOUBLE_EQ(b, 0.0);
  EXPECT_DOUBLE_EQ(none.rouge_l, 0.0);
}

TEST(TextOverlap, HandCountedExample) {
  TextOverlap t = ComputeTextOverlap(Words({"the", "cat", "sat"}), {Words({"the", "cat", "ran"})});
  // Unigrams: 2 of 3 clipped matches, equal lengths so no brevity penalty.
  EXPECT_NEAR(t.bleu[0], 100.0 * 2.0 / 3.0, 1e-9);
  // Bigrams: 1 of 2, so BLEU-2 = sqrt(2/3 * 1/2).
  EXPECT_NEAR(t.bleu[1], 100.0 * std::sqrt(2.0 / 3.0 * 0.5), 1e-9);
  // LCS "the cat" = 2: P = R = 2/3.
  EXPECT_NEAR(t.rouge_l, 100.0 * 2.0 / 3.0, 1e-9);
}

TEST(TextOverlap, ClippingAndBrevity) {
  // "the the the" against "the cat": clipped unigram precision 1/3.
  TextOverlap clipped = ComputeTextOverlap(Words({"the", "the", "the"}), {Words({"the", "cat"})});
  EXPECT_NEAR(clipped.bleu[0], 100.0 / 3.0, 1e-9);
  // Short candidate: brevity penalty exp(1 - 4/2).
  TextOverlap brief =
      ComputeTextOverlap(Words({"the", "cat"}), {Words({"the", "cat", "sat", "down"})});
  EXPECT_NEAR(brief.bleu[0], 100.0 * std::exp(1.0 - 2.0), 1e-9);
  EXPECT_THROW(ComputeTextOverlap(Words({"a"}), {}), Error);
}

TEST(RKw, Fractions) {
  EXPECT_DOUBLE_EQ(RKw(Words({"nice", "pools", "and", "bar"}), {"pool", "bar"}), 1.0);
  EXPECT_DOUBLE_EQ(RKw(Words({"nice", "room"}), {"pool", "bar"}), 0.0);
  EXPECT_DOUBLE_EQ(RKw(Words({"the", "pool"}), {"pool", "bar"}), 0.5);
  EXPECT_THROW(RKw(Words({"x"}), {}), Error);
}

TEST(LeaveOneOut, RandomScoresGiveUniformRecall) {
  std::vector<LooUser> users;
  for (int64_t u = 0; u < 2000; ++u) users.push_back({u, {u % 200}, {u % 200}});
  LooOptions o;
  o.n_negatives = 99;
  o.cutoff = 10;
  LooReport r = LeaveOneOut(
      users, 200,
      [](int64_t user, int64_t item) {
        return static_cast<double>(MixSeed(static_cast<uint64_t>(user * 1000 + item), "s") >> 11);
      },
      o);
  EXPECT_EQ(r.slate_size, 100);
  EXPECT_EQ(r.users_evaluated, 2000);
  // Binomial standard error at p = 0.1 over 2000 users is about 0.0067.
  EXPECT_NEAR(r.mean.recall, 0.10, 0.03);
}

TEST(LeaveOneOut, UsersWithoutEnoughNegativesAreSkipped) {
  std::vector<LooUser> users = {{0, {1}, {0, 1, 2, 3}}, {1, {2}, {2}}};
  LooOptions o;
  o.n_negatives = 3;
  LooReport r = LeaveOneOut(users, 5, [](int64_t, int64_t item) { return double(item); }, o);
  EXPECT_EQ(r.users_skipped, 1);
  EXPECT_EQ(r.users_evaluated, 1);
}

TEST(LeaveOneOut, DeterministicUnderSeed) {
  std::vector<LooUser> users;
  for (int64_t u = 0; u < 50; ++u) users.push_back({u, {u % 7}, {u % 7}});
  auto score = [](int64_t u, int64_t i) { return std::sin(double(u * 31 + i)); };
  LooOptions o;
  o.n_negatives = 20;
  LooReport a = LeaveOneOut(users, 60, score, o), b = LeaveOneOut(users, 60, score, o);
  EXPECT_EQ(a.mean.ndcg, b.mean.ndcg);
  EXPECT_EQ(a.mean.recall, b.mean.recall);
}

}  // namespace
}  // namespace critrec
