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

#ifndef CRITREC_MODEL_MLP_HEAD_H_
#define CRITREC_MODEL_MLP_HEAD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "critrec/numerics/param_store.h"

namespace critrec {

// Frozen copy of a LeakyReLU feed-forward head, evaluated in double precision
// without a tape.
class MlpHead {
 public:
  MlpHead() = default;
  // Reads <prefix>.0.{w,b} ... <prefix>.<n_linear-1>.{w,b}.
  static MlpHead FromParams(const ParamStore &params, const std::string &prefix,
                            size_t n_linear, double slope);

  int64_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int64_t output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }

  std::vector<double> Logits(std::span<const double> z) const;
  std::vector<double> Probabilities(std::span<const double> z) const;

  // Mean binary cross-entropy of sigmoid(logits) against `target`. Fills
  // the gradient with respect to z and the probabilities when requested.
  double Bce(std::span<const double> z, std::span<const double> target,
             std::vector<double> *grad_z, std::vector<double> *probs) const;

 private:
  struct Layer {
    int64_t in = 0;
    int64_t out = 0;
    std::vector<double> w;  // [in, out]
    std::vector<double> b;
  };
  // Pre-activations of every layer, the last being the logits.
  std::vector<std::vector<double>> Forward(std::span<const double> z) const;

  std::vector<Layer> layers_;
  double slope_ = 0.0;
};

}  // namespace critrec

#endif  // CRITREC_MODEL_MLP_HEAD_H_
