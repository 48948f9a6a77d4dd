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

#include "critrec/model/network.h"

#include <cmath>

#include "critrec/common/error.h"
#include "critrec/numerics/ops.h"

namespace critrec {

ForwardPass::ForwardPass(const Network &net, Tape &tape, bool training, Rng *rng)
    : net_(net), tape_(tape), training_(training), rng_(rng) {
  if (training_ && rng_ == nullptr) throw Error("contract", "training pass needs an rng");
}

Var ForwardPass::P(const std::string &name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  Var v = tape_.Param(name, net_.params().Get(name));
  bound_.emplace(name, v);
  return v;
}

Var ForwardPass::Drop(Var x) {
  if (!training_) return x;
  return ops::Dropout(x, static_cast<Real>(net_.hyper().dropout), *rng_);
}

Tensor SinusoidalTable(int64_t rows, int64_t d) {
  Tensor t({rows, d});
  for (int64_t pos = 0; pos < rows; ++pos) {
    for (int64_t i = 0; i < d; i += 2) {
      const double angle = pos / std::pow(10000.0, static_cast<double>(i) / d);
      t.at(pos, i) = static_cast<Real>(std::sin(angle));
      if (i + 1 < d) t.at(pos, i + 1) = static_cast<Real>(std::cos(angle));
    }
  }
  return t;
}

namespace {

void AddLinear(ParamStore &ps, const std::string &prefix, int64_t in, int64_t out) {
  ps.Add(prefix + ".w", Tensor({in, out}));
  ps.Add(prefix + ".b", Tensor({out}));
}

void AddLayerNorm(ParamStore &ps, const std::string &prefix, int64_t d) {
  ps.Add(prefix + ".g", Tensor({d}));
  ps.Add(prefix + ".b", Tensor({d}));
}

void AddAttention(ParamStore &ps, const std::string &prefix, int64_t d) {
  for (const char *m : {"q", "k", "v", "o"}) AddLinear(ps, prefix + "." + m, d, d);
}

bool EndsWith(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Network::Network(const HyperParams &hyper, int64_t n_users, int64_t n_items, int64_t vocab_size,
                 std::vector<int64_t> keyphrase_tokens)
    : hyper_(hyper),
      n_users_(n_users),
      n_items_(n_items),
      vocab_size_(vocab_size),
      keyphrase_tokens_(std::move(keyphrase_tokens)) {
  hyper_.Validate();
  const int64_t d = hyper_.d_model;
  const int64_t k = num_keyphrases();
  if (k == 0) throw Error("invalid-config", "keyphrase vocabulary is empty");
  for (int64_t t : keyphrase_tokens_) {
    if (t < 0 || t >= vocab_size_) throw Error("invalid-config", "keyphrase token out of range");
  }

  ParamStore &ps = params_;
  ps.Add("embedding", Tensor({vocab_size, d}));
  ps.Add("user_factors", Tensor({n_users, d}));
  ps.Add("item_factors", Tensor({n_items, d}));
  AddLinear(ps, "proj", 4 * d, hyper_.d_z);
  for (int64_t l = 0; l < hyper_.n_layers; ++l) {
    const std::string p = "enc." + std::to_string(l);
    AddAttention(ps, p + ".self", d);
    AddLayerNorm(ps, p + ".ln1", d);
    AddLinear(ps, p + ".ff1", d, hyper_.d_ff);
    AddLinear(ps, p + ".ff2", hyper_.d_ff, d);
    AddLayerNorm(ps, p + ".ln2", d);
  }
  for (int64_t l = 0; l < hyper_.n_layers; ++l) {
    const std::string p = "dec." + std::to_string(l);
    AddAttention(ps, p + ".self", d);
    AddLayerNorm(ps, p + ".ln1", d);
    AddLinear(ps, p + ".cross.v", d, d);
    AddLinear(ps, p + ".cross.o", d, d);
    AddLayerNorm(ps, p + ".ln2", d);
    AddLinear(ps, p + ".ff1", d, hyper_.d_ff);
    AddLinear(ps, p + ".ff2", hyper_.d_ff, d);
    AddLayerNorm(ps, p + ".ln3", d);
  }
  AddLinear(ps, "dec.out", d, vocab_size);
  for (const auto &[prefix, out] : {std::pair<std::string, int64_t>{"rating", 1}, {"kp", k}}) {
    int64_t in = hyper_.d_z;
    for (size_t n = 0; n < hyper_.head_dims.size(); ++n) {
      AddLinear(ps, prefix + "." + std::to_string(n), in, hyper_.head_dims[n]);
      in = hyper_.head_dims[n];
    }
    AddLinear(ps, prefix + "." + std::to_string(hyper_.head_dims.size()), in, out);
  }
  positional_ = SinusoidalTable(std::max<int64_t>(64, 2 * hyper_.max_just_len + 2), d);
}

void Network::Initialize(uint64_t seed) {
  Rng rng(MixSeed(seed, "init"));
  for (const std::string &name : params_.names()) {
    Tensor &t = params_.Get(name);
    if (name == "user_factors" || name == "item_factors") {
      for (int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<Real>(0.01 * rng.Normal());
    } else if (name == "embedding") {
      const double a = 1.0 / std::sqrt(static_cast<double>(hyper_.d_model));
      for (int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<Real>(rng.Uniform(-a, a));
    } else if (EndsWith(name, ".w")) {
      const double a = 1.0 / std::sqrt(static_cast<double>(t.shape()[0]));
      for (int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<Real>(rng.Uniform(-a, a));
    } else if (EndsWith(name, ".g")) {
      t.Fill(Real(1));
    } else {
      t.Fill(Real(0));
    }
  }
}

Var Network::Embed(ForwardPass &fp, const std::vector<int64_t> &ids,
                   const std::vector<int64_t> &positions) const {
  const int64_t d = hyper_.d_model;
  Tensor pe({static_cast<int64_t>(positions.size()), d});
  for (size_t r = 0; r < positions.size(); ++r) {
    if (positions[r] >= positional_.rows()) {
      throw Error("contract", "sequence longer than the positional table");
    }
    std::copy_n(positional_.data() + positions[r] * d, d, pe.data() + r * d);
  }
  Var x = ops::GatherRows(fp.P("embedding"), ids);
  x = ops::Scale(x, static_cast<Real>(std::sqrt(static_cast<double>(d))));
  return fp.Drop(ops::Add(x, fp.tape().Constant(std::move(pe))));
}

Var Network::SelfAttention(ForwardPass &fp, const std::string &prefix, Var x,
                           const kernels::AttentionLayout &layout) const {
  Var q = ops::Linear(x, fp.P(prefix + ".q.w"), fp.P(prefix + ".q.b"));
  Var k = ops::Linear(x, fp.P(prefix + ".k.w"), fp.P(prefix + ".k.b"));
  Var v = ops::Linear(x, fp.P(prefix + ".v.w"), fp.P(prefix + ".v.b"));
  Var a = ops::Attention(q, k, v, layout);
  return ops::Linear(a, fp.P(prefix + ".o.w"), fp.P(prefix + ".o.b"));
}

Var Network::FeedForward(ForwardPass &fp, const std::string &prefix, Var x) const {
  Var h = ops::Relu(ops::Linear(x, fp.P(prefix + ".ff1.w"), fp.P(prefix + ".ff1.b")));
  return ops::Linear(h, fp.P(prefix + ".ff2.w"), fp.P(prefix + ".ff2.b"));
}

Var Network::EncodeJustifications(ForwardPass &fp,
                                  const std::vector<const TokenSeq *> &seqs) const {
  std::vector<int64_t> ids, positions, offsets{0}, firsts;
  for (const TokenSeq *s : seqs) {
    firsts.push_back(static_cast<int64_t>(ids.size()));
    ids.push_back(TokenVocab::kBos);
    positions.push_back(0);
    for (size_t t = 0; t < s->size(); ++t) {
      ids.push_back((*s)[t]);
      positions.push_back(static_cast<int64_t>(t) + 1);
    }
    offsets.push_back(static_cast<int64_t>(ids.size()));
  }
  kernels::AttentionLayout layout;
  layout.q_offsets = offsets;
  layout.k_offsets = offsets;
  layout.heads = hyper_.n_heads;
  layout.causal = false;

  Var x = Embed(fp, ids, positions);
  for (int64_t l = 0; l < hyper_.n_layers; ++l) {
    const std::string p = "enc." + std::to_string(l);
    x = ops::LayerNorm(ops::Add(x, fp.Drop(SelfAttention(fp, p + ".self", x, layout))),
                       fp.P(p + ".ln1.g"), fp.P(p + ".ln1.b"));
    x = ops::LayerNorm(ops::Add(x, fp.Drop(FeedForward(fp, p, x))), fp.P(p + ".ln2.g"),
                       fp.P(p + ".ln2.b"));
  }
  return ops::Sigmoid(ops::GatherRows(x, firsts));
}

Var Network::Gamma(ForwardPass &fp,
                   const std::vector<const std::vector<TokenSeq> *> &histories) const {
  std::vector<const TokenSeq *> seqs;
  std::vector<int64_t> offsets{0};
  for (const auto *h : histories) {
    for (const TokenSeq &s : *h) seqs.push_back(&s);
    offsets.push_back(static_cast<int64_t>(seqs.size()));
  }
  return ops::SegmentMean(EncodeJustifications(fp, seqs), offsets);
}

Var Network::Latent(ForwardPass &fp, Var gamma_u, Var gamma_i,
                    const std::vector<int64_t> &users, const std::vector<int64_t> &items) const {
  Var bu = ops::GatherRows(fp.P("user_factors"), users);
  Var bi = ops::GatherRows(fp.P("item_factors"), items);
  Var x = ops::ConcatCols({gamma_u, gamma_i, bu, bi});
  return ops::Linear(x, fp.P("proj.w"), fp.P("proj.b"));
}

Var Network::Head(ForwardPass &fp, const std::string &prefix, Var z) const {
  Var h = z;
  const size_t hidden = hyper_.head_dims.size();
  for (size_t n = 0; n <= hidden; ++n) {
    const std::string p = prefix + "." + std::to_string(n);
    h = ops::Linear(h, fp.P(p + ".w"), fp.P(p + ".b"));
    if (n < hidden) h = ops::LeakyRelu(h, static_cast<Real>(hyper_.leaky_slope));
  }
  return h;
}

Var Network::RatingLogits(ForwardPass &fp, Var z) const { return Head(fp, "rating", z); }

Var Network::KeyphraseLogits(ForwardPass &fp, Var z) const { return Head(fp, "kp", z); }

Var Network::AspectEmbedding(ForwardPass &fp, const std::vector<BitVector> &sets) const {
  std::vector<int64_t> ids, offsets{0};
  for (const BitVector &set : sets) {
    if (static_cast<int64_t>(set.size()) != num_keyphrases()) {
      throw Error("shape", "keyphrase set of length " + std::to_string(set.size()) +
                               " vs K=" + std::to_string(num_keyphrases()));
    }
    for (size_t k = 0; k < set.size(); ++k) {
      if (set[k]) ids.push_back(keyphrase_tokens_[k]);
    }
    offsets.push_back(static_cast<int64_t>(ids.size()));
  }
  return ops::SegmentMean(ops::GatherRows(fp.P("embedding"), ids), offsets);
}

Var Network::DecoderLogits(ForwardPass &fp, Var z_tilde, const std::vector<int64_t> &rows,
                           const std::vector<const TokenSeq *> &inputs) const {
  std::vector<int64_t> ids, positions, offsets{0}, token_rows;
  for (size_t s = 0; s < inputs.size(); ++s) {
    for (size_t t = 0; t < inputs[s]->size(); ++t) {
      ids.push_back((*inputs[s])[t]);
      positions.push_back(static_cast<int64_t>(t));
      token_rows.push_back(rows[s]);
    }
    offsets.push_back(static_cast<int64_t>(ids.size()));
  }
  kernels::AttentionLayout layout;
  layout.q_offsets = offsets;
  layout.k_offsets = offsets;
  layout.heads = hyper_.n_heads;
  layout.causal = true;

  Var x = Embed(fp, ids, positions);
  for (int64_t l = 0; l < hyper_.n_layers; ++l) {
    const std::string p = "dec." + std::to_string(l);
    x = ops::LayerNorm(ops::Add(x, fp.Drop(SelfAttention(fp, p + ".self", x, layout))),
                       fp.P(p + ".ln1.g"), fp.P(p + ".ln1.b"));
    // Attention over a single memory slot reduces to its value projection.
    Var mem = ops::Linear(ops::Linear(z_tilde, fp.P(p + ".cross.v.w"), fp.P(p + ".cross.v.b")),
                          fp.P(p + ".cross.o.w"), fp.P(p + ".cross.o.b"));
    x = ops::LayerNorm(ops::Add(x, fp.Drop(ops::GatherRows(mem, token_rows))),
                       fp.P(p + ".ln2.g"), fp.P(p + ".ln2.b"));
    x = ops::LayerNorm(ops::Add(x, fp.Drop(FeedForward(fp, p, x))), fp.P(p + ".ln3.g"),
                       fp.P(p + ".ln3.b"));
  }
  return ops::Linear(x, fp.P("dec.out.w"), fp.P("dec.out.b"));
}

LossBreakdown Network::LossFromLatent(ForwardPass &fp, Var z,
                                      const std::vector<const Example *> &batch) const {
  if (batch.empty()) throw Error("contract", "empty batch");
  const int64_t b = static_cast<int64_t>(batch.size());
  const int64_t k = num_keyphrases();
  Tensor labels({b, 1});
  Tensor kp_targets({b, k});
  std::vector<BitVector> sets;
  for (int64_t r = 0; r < b; ++r) {
    labels[r] = static_cast<Real>(batch[r]->label);
    for (int64_t c = 0; c < k; ++c) kp_targets[r * k + c] = static_cast<Real>(batch[r]->keyphrases[c]);
    sets.push_back(batch[r]->keyphrases);
  }
  Var l_r = ops::MseLoss(ops::Sigmoid(RatingLogits(fp, z)), labels);
  Var l_kp = ops::BceWithLogits(KeyphraseLogits(fp, z), kp_targets);

  std::vector<TokenSeq> inputs;
  std::vector<int64_t> rows, targets;
  for (int64_t r = 0; r < b; ++r) {
    for (const TokenSeq &t : batch[r]->targets) {
      TokenSeq in{TokenVocab::kBos};
      in.insert(in.end(), t.begin(), t.end());
      inputs.push_back(std::move(in));
      rows.push_back(r);
      targets.insert(targets.end(), t.begin(), t.end());
      targets.push_back(TokenVocab::kEos);
    }
  }
  Var l_just;
  if (inputs.empty()) {
    l_just = fp.tape().Constant(Tensor::Scalar(0));
  } else {
    Var z_tilde = ops::Add(z, AspectEmbedding(fp, sets));
    std::vector<const TokenSeq *> ptrs;
    for (const TokenSeq &s : inputs) ptrs.push_back(&s);
    l_just = ops::LabelSmoothedCrossEntropy(DecoderLogits(fp, z_tilde, rows, ptrs), targets,
                                            static_cast<Real>(hyper_.label_smoothing));
  }

  LossBreakdown out;
  out.total = ops::Add(ops::Add(ops::Scale(l_r, static_cast<Real>(hyper_.lambda_r)),
                                ops::Scale(l_kp, static_cast<Real>(hyper_.lambda_kp))),
                       ops::Scale(l_just, static_cast<Real>(hyper_.lambda_just)));
  out.rating = l_r.value().item();
  out.keyphrase = l_kp.value().item();
  out.justification = l_just.value().item();
  out.total_value = out.total.value().item();
  out.justification_tokens = static_cast<int64_t>(targets.size());
  return out;
}

LossBreakdown Network::JointLoss(ForwardPass &fp, const ModelData &data,
                                 const std::vector<const Example *> &batch) const {
  // Each distinct user and item history is encoded once per batch.
  std::map<int64_t, int64_t> user_slot, item_slot;
  for (const Example *e : batch) {
    user_slot.emplace(e->user, 0);
    item_slot.emplace(e->item, 0);
  }
  std::vector<const std::vector<TokenSeq> *> histories;
  for (auto &[u, slot] : user_slot) {
    slot = static_cast<int64_t>(histories.size());
    histories.push_back(&data.user_histories.at(u));
  }
  for (auto &[i, slot] : item_slot) {
    slot = static_cast<int64_t>(histories.size());
    histories.push_back(&data.item_histories.at(i));
  }
  Var gamma = Gamma(fp, histories);
  std::vector<int64_t> urows, irows, users, items;
  for (const Example *e : batch) {
    urows.push_back(user_slot.at(e->user));
    irows.push_back(item_slot.at(e->item));
    users.push_back(e->user);
    items.push_back(e->item);
  }
  Var z = Latent(fp, ops::GatherRows(gamma, urows), ops::GatherRows(gamma, irows), users, items);
  return LossFromLatent(fp, z, batch);
}

}  // namespace critrec
