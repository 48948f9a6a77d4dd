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

#ifndef CRITREC_MODEL_NETWORK_H_
#define CRITREC_MODEL_NETWORK_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "critrec/common/rng.h"
#include "critrec/model/dataset.h"
#include "critrec/model/hyperparams.h"
#include "critrec/numerics/kernels.h"
#include "critrec/numerics/tape.h"

namespace critrec {

class Network;

// One forward pass over a tape. Parameters are bound lazily, once each.
class ForwardPass {
 public:
  // `rng` may be null when `training` is false.
  ForwardPass(const Network &net, Tape &tape, bool training, Rng *rng);

  Var P(const std::string &name);
  Var Drop(Var x);
  Tape &tape() { return tape_; }
  bool training() const { return training_; }

 private:
  const Network &net_;
  Tape &tape_;
  bool training_;
  Rng *rng_;
  std::map<std::string, Var> bound_;
};

struct LossBreakdown {
  Var total;
  double rating = 0.0;
  double keyphrase = 0.0;
  double justification = 0.0;
  double total_value = 0.0;
  int64_t justification_tokens = 0;
};

// Parameter layout (row-vector convention, y = x W + b):
//   embedding [V, d], user_factors [U, d], item_factors [I, d],
//   proj.w [4d, d_z], proj.b [d_z],
//   enc.<l>.* / dec.<l>.* transformer blocks, dec.out.{w,b} [d, V],
//   rating.<n>.{w,b} and kp.<n>.{w,b} feed-forward heads.
class Network {
 public:
  Network() = default;
  Network(const HyperParams &hyper, int64_t n_users, int64_t n_items, int64_t vocab_size,
          std::vector<int64_t> keyphrase_tokens);

  // Fan-in uniform weights, zero biases, unit layer-norm gains, small-normal
  // factor tables.
  void Initialize(uint64_t seed);

  const HyperParams &hyper() const { return hyper_; }
  ParamStore &params() { return params_; }
  const ParamStore &params() const { return params_; }
  int64_t num_keyphrases() const { return static_cast<int64_t>(keyphrase_tokens_.size()); }
  const std::vector<int64_t> &keyphrase_tokens() const { return keyphrase_tokens_; }
  int64_t vocab_size() const { return vocab_size_; }
  int64_t num_users() const { return n_users_; }
  int64_t num_items() const { return n_items_; }

  // Sigmoid of the first-position final-layer state of each sequence; the
  // begin token is prepended internally. [S, d]
  Var EncodeJustifications(ForwardPass &fp, const std::vector<const TokenSeq *> &seqs) const;
  // Mean of EncodeJustifications over each history. [E, d]
  Var Gamma(ForwardPass &fp, const std::vector<const std::vector<TokenSeq> *> &histories) const;
  // z = [gamma_u | gamma_i | beta_u | beta_i] W + b. [B, d_z]
  Var Latent(ForwardPass &fp, Var gamma_u, Var gamma_i, const std::vector<int64_t> &users,
             const std::vector<int64_t> &items) const;
  Var RatingLogits(ForwardPass &fp, Var z) const;     // [B, 1]
  Var KeyphraseLogits(ForwardPass &fp, Var z) const;  // [B, K]
  // Mean embedding of the selected keyphrases' tokens; zero for an empty set.
  Var AspectEmbedding(ForwardPass &fp, const std::vector<BitVector> &sets) const;
  // Teacher-forced decoder logits. Sequence s reads row rows[s] of z_tilde
  // and inputs[s] (already starting with the begin token). [sum len, V]
  Var DecoderLogits(ForwardPass &fp, Var z_tilde, const std::vector<int64_t> &rows,
                    const std::vector<const TokenSeq *> &inputs) const;

  // Losses given a precomputed latent for each example in `batch`.
  LossBreakdown LossFromLatent(ForwardPass &fp, Var z,
                               const std::vector<const Example *> &batch) const;
  LossBreakdown JointLoss(ForwardPass &fp, const ModelData &data,
                          const std::vector<const Example *> &batch) const;

  const Tensor &positional() const { return positional_; }

 private:
  Var Embed(ForwardPass &fp, const std::vector<int64_t> &ids,
            const std::vector<int64_t> &positions) const;
  Var SelfAttention(ForwardPass &fp, const std::string &prefix, Var x,
                    const kernels::AttentionLayout &layout) const;
  Var FeedForward(ForwardPass &fp, const std::string &prefix, Var x) const;
  Var Head(ForwardPass &fp, const std::string &prefix, Var z) const;

  HyperParams hyper_;
  int64_t n_users_ = 0;
  int64_t n_items_ = 0;
  int64_t vocab_size_ = 0;
  std::vector<int64_t> keyphrase_tokens_;
  ParamStore params_;
  Tensor positional_;
};

// Sinusoidal table [rows, d].
Tensor SinusoidalTable(int64_t rows, int64_t d);

}  // namespace critrec

#endif  // CRITREC_MODEL_NETWORK_H_
