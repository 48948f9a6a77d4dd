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

#include "critrec/model/engine.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "critrec/common/error.h"

namespace critrec {

void to_json(nlohmann::json &j, const LatentState &s) {
  j = nlohmann::json{{"user_id", s.user_id}, {"item_id", s.item_id}, {"edited", s.edited},
                     {"z", s.z}};
}

void from_json(const nlohmann::json &j, LatentState &s) {
  j.at("user_id").get_to(s.user_id);
  j.at("item_id").get_to(s.item_id);
  j.at("edited").get_to(s.edited);
  j.at("z").get_to(s.z);
}

std::vector<int64_t> TopIndices(const std::vector<double> &values, int64_t m) {
  std::vector<int64_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  const int64_t take = std::clamp<int64_t>(m, 0, static_cast<int64_t>(values.size()));
  std::partial_sort(order.begin(), order.begin() + take, order.end(),
                    [&values](int64_t a, int64_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  order.resize(take);
  return order;
}

BitVector TopMask(const std::vector<double> &values, int64_t m) {
  BitVector mask(values.size(), 0);
  for (int64_t i : TopIndices(values, m)) mask[i] = 1;
  return mask;
}

Engine::Engine(ModelBundle bundle) : bundle_(std::move(bundle)) {
  const Network &net = bundle_.network;
  const size_t n_linear = net.hyper().head_dims.size() + 1;
  rating_head_ = MlpHead::FromParams(net.params(), "rating", n_linear, net.hyper().leaky_slope);
  keyphrase_head_ = MlpHead::FromParams(net.params(), "kp", n_linear, net.hyper().leaky_slope);
  if (bundle_.users.size() != net.num_users() || bundle_.items.size() != net.num_items() ||
      static_cast<int64_t>(bundle_.user_histories.size()) != net.num_users() ||
      static_cast<int64_t>(bundle_.item_histories.size()) != net.num_items()) {
    throw Error("contract", "entity tables do not match the factor tables");
  }
  if (bundle_.tokens.size() != net.vocab_size() ||
      static_cast<int64_t>(bundle_.keyphrases.size()) != net.num_keyphrases()) {
    throw Error("contract", "vocabularies do not match the network");
  }
  user_gamma_ = ComputeGammas(bundle_.user_histories);
  item_gamma_ = ComputeGammas(bundle_.item_histories);
}

std::vector<std::vector<double>> Engine::ComputeGammas(
    const std::vector<std::vector<TokenSeq>> &histories) const {
  constexpr size_t kChunk = 32;
  std::vector<std::vector<double>> out;
  out.reserve(histories.size());
  for (size_t start = 0; start < histories.size(); start += kChunk) {
    const size_t end = std::min(histories.size(), start + kChunk);
    std::vector<const std::vector<TokenSeq> *> chunk;
    for (size_t e = start; e < end; ++e) chunk.push_back(&histories[e]);
    Tape tape;
    ForwardPass fp(network(), tape, false, nullptr);
    const Tensor &g = network().Gamma(fp, chunk).value();
    for (int64_t r = 0; r < g.rows(); ++r) {
      auto row = g.row(r);
      out.emplace_back(row.begin(), row.end());
    }
  }
  return out;
}

LatentState Engine::Encode(const std::string &user_id, const std::string &item_id) const {
  return EncodeIndex(bundle_.users.Find(user_id), bundle_.items.Find(item_id));
}

LatentState Engine::EncodeIndex(int64_t user, int64_t item) const {
  const ParamStore &ps = network().params();
  const int64_t d = hyper().d_model;
  const Tensor &w = ps.Get("proj.w");
  const Tensor &b = ps.Get("proj.b");
  const Tensor &bu = ps.Get("user_factors");
  const Tensor &bi = ps.Get("item_factors");
  if (user < 0 || user >= bu.rows()) throw Error("unknown-entity", "user index out of range");
  if (item < 0 || item >= bi.rows()) throw Error("unknown-entity", "item index out of range");

  std::vector<double> x;
  x.reserve(4 * d);
  const std::vector<double> &gu = user_gamma_[user];
  const std::vector<double> &gi = item_gamma_[item];
  x.insert(x.end(), gu.begin(), gu.end());
  x.insert(x.end(), gi.begin(), gi.end());
  for (Real v : bu.row(user)) x.push_back(v);
  for (Real v : bi.row(item)) x.push_back(v);

  const int64_t dz = w.cols();
  LatentState s;
  s.z.assign(b.data(), b.data() + dz);
  for (int64_t i = 0; i < 4 * d; ++i) {
    const Real *row = w.data() + i * dz;
    for (int64_t j = 0; j < dz; ++j) s.z[j] += x[i] * row[j];
  }
  s.user_id = bundle_.users.Id(user);
  s.item_id = bundle_.items.Id(item);
  return s;
}

double Engine::PredictRating(const std::vector<double> &z) const {
  return rating_head_.Probabilities(z)[0];
}

std::vector<double> Engine::KeyphraseProbs(const std::vector<double> &z) const {
  return keyphrase_head_.Probabilities(z);
}

std::pair<std::vector<double>, BitVector> Engine::ExplainKeyphrases(const std::vector<double> &z,
                                                                    int64_t m) const {
  std::vector<double> probs = KeyphraseProbs(z);
  BitVector set = TopMask(probs, m);
  return {std::move(probs), std::move(set)};
}

std::vector<double> Engine::EncodeAspects(const BitVector &set) const {
  const int64_t d = hyper().d_model;
  const Tensor &emb = network().params().Get("embedding");
  const std::vector<int64_t> &tokens = network().keyphrase_tokens();
  if (set.size() != tokens.size()) throw Error("shape", "keyphrase set length mismatch");
  std::vector<double> out(d, 0.0);
  int64_t count = 0;
  for (size_t k = 0; k < set.size(); ++k) {
    if (!set[k]) continue;
    const Real *row = emb.data() + tokens[k] * d;
    for (int64_t c = 0; c < d; ++c) out[c] += row[c];
    ++count;
  }
  if (count > 0) {
    for (double &v : out) v /= static_cast<double>(count);
  }
  return out;
}

std::vector<std::vector<double>> Engine::NextTokenLogProbs(
    const std::vector<double> &z_tilde, const std::vector<TokenSeq> &prefixes) const {
  Tape tape;
  ForwardPass fp(network(), tape, false, nullptr);
  Tensor zt({1, static_cast<int64_t>(z_tilde.size())});
  for (size_t c = 0; c < z_tilde.size(); ++c) zt[c] = static_cast<Real>(z_tilde[c]);
  std::vector<const TokenSeq *> ptrs;
  for (const TokenSeq &p : prefixes) ptrs.push_back(&p);
  const Tensor &logits =
      network().DecoderLogits(fp, tape.Constant(std::move(zt)), std::vector<int64_t>(prefixes.size(), 0), ptrs)
          .value();
  std::vector<std::vector<double>> out;
  int64_t row = -1;
  for (const TokenSeq &p : prefixes) {
    row += static_cast<int64_t>(p.size());
    auto r = logits.row(row);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (Real v : r) sum += std::exp(v - mx);
    const double lse = mx + std::log(sum);
    std::vector<double> lp(r.size());
    for (size_t v = 0; v < r.size(); ++v) lp[v] = r[v] - lse;
    out.push_back(std::move(lp));
  }
  return out;
}

TokenSeq Engine::GenerateJustification(const std::vector<double> &z,
                                       const std::vector<double> &a_kp,
                                       const DecodeOptions &options) const {
  if (z.size() != a_kp.size()) throw Error("shape", "z and a_kp differ in size");
  std::vector<double> zt(z.size());
  for (size_t c = 0; c < z.size(); ++c) zt[c] = z[c] + a_kp[c];
  const int64_t max_len = std::min<int64_t>(
      options.max_len > 0 ? options.max_len : hyper().max_just_len,
      network().positional().rows() - 1);
  const int64_t width = std::max<int64_t>(1, options.beam_width);

  struct Hyp {
    TokenSeq seq;  // starts with the begin token
    double score = 0.0;
    bool done = false;
  };
  std::vector<Hyp> beams{{{TokenVocab::kBos}, 0.0, false}};
  for (int64_t step = 0; step < max_len; ++step) {
    std::vector<TokenSeq> live;
    for (const Hyp &h : beams) {
      if (!h.done) live.push_back(h.seq);
    }
    if (live.empty()) break;
    std::vector<std::vector<double>> lp = NextTokenLogProbs(zt, live);

    // (score, source order, token); source order keeps ties deterministic.
    std::vector<std::tuple<double, int64_t, int64_t, Hyp>> pool;
    int64_t order = 0, live_idx = 0;
    for (const Hyp &h : beams) {
      if (h.done) {
        pool.emplace_back(h.score, order++, -1, h);
        continue;
      }
      std::vector<double> &row = lp[live_idx++];
      // The first token is never the end marker, so output is nonempty.
      if (step == 0) row[TokenVocab::kEos] = -std::numeric_limits<double>::infinity();
      row[TokenVocab::kBos] = -std::numeric_limits<double>::infinity();
      row[TokenVocab::kPad] = -std::numeric_limits<double>::infinity();
      for (int64_t v : TopIndices(row, width)) {
        Hyp next = h;
        next.score += row[v];
        if (v == TokenVocab::kEos) {
          next.done = true;
        } else {
          next.seq.push_back(v);
          if (static_cast<int64_t>(next.seq.size()) - 1 >= max_len) next.done = true;
        }
        pool.emplace_back(next.score, order++, v, std::move(next));
      }
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto &a, const auto &b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      return std::get<1>(a) < std::get<1>(b);
    });
    beams.clear();
    for (size_t i = 0; i < pool.size() && static_cast<int64_t>(i) < width; ++i) {
      beams.push_back(std::move(std::get<3>(pool[i])));
    }
  }
  // Length-normalized choice among the final hypotheses.
  const Hyp *best = &beams.front();
  double best_norm = best->score / static_cast<double>(best->seq.size());
  for (const Hyp &h : beams) {
    const double norm = h.score / static_cast<double>(h.seq.size());
    if (norm > best_norm) {
      best = &h;
      best_norm = norm;
    }
  }
  return TokenSeq(best->seq.begin() + 1, best->seq.end());
}

Explanation Engine::Explain(const std::vector<double> &z, int64_t m, bool with_justification,
                            const DecodeOptions &options) const {
  Explanation e;
  e.rating = PredictRating(z);
  std::tie(e.keyphrase_probs, e.keyphrase_set) = ExplainKeyphrases(z, m);
  if (with_justification) {
    e.justification = GenerateJustification(z, EncodeAspects(e.keyphrase_set), options);
  }
  return e;
}

std::vector<Recommendation> Engine::RecommendTopN(const std::string &user_id,
                                                  const std::vector<std::string> &candidates,
                                                  int64_t n, bool with_justification) const {
  const int64_t user = bundle_.users.Find(user_id);
  std::vector<Recommendation> recs;
  std::vector<std::vector<double>> latents;
  for (const std::string &item_id : candidates) {
    Recommendation r;
    r.item_id = item_id;
    r.item_index = bundle_.items.Find(item_id);
    LatentState s = EncodeIndex(user, r.item_index);
    r.score = PredictRating(s.z);
    recs.push_back(std::move(r));
    latents.push_back(std::move(s.z));
  }
  std::vector<size_t> order(recs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&recs](size_t a, size_t b) {
    if (recs[a].score != recs[b].score) return recs[a].score > recs[b].score;
    return recs[a].item_index < recs[b].item_index;
  });
  const size_t take = std::min(order.size(), static_cast<size_t>(std::max<int64_t>(n, 0)));
  std::vector<Recommendation> out;
  for (size_t i = 0; i < take; ++i) {
    Recommendation r = recs[order[i]];
    r.explanation = Explain(latents[order[i]], hyper().display_keyphrases, with_justification);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace critrec
