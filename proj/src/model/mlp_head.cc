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

#include "critrec/model/mlp_head.h"

#include <cmath>

#include "critrec/common/error.h"

namespace critrec {

MlpHead MlpHead::FromParams(const ParamStore &params, const std::string &prefix,
                            size_t n_linear, double slope) {
  MlpHead head;
  head.slope_ = slope;
  for (size_t n = 0; n < n_linear; ++n) {
    const std::string p = prefix + "." + std::to_string(n);
    const Tensor &w = params.Get(p + ".w");
    const Tensor &b = params.Get(p + ".b");
    Layer layer;
    layer.in = w.shape()[0];
    layer.out = w.shape()[1];
    if (!head.layers_.empty() && head.layers_.back().out != layer.in) {
      throw Error("shape", p + ".w " + ShapeToString(w.shape()) + " does not chain");
    }
    layer.w.assign(w.data(), w.data() + w.size());
    layer.b.assign(b.data(), b.data() + b.size());
    head.layers_.push_back(std::move(layer));
  }
  return head;
}

std::vector<std::vector<double>> MlpHead::Forward(std::span<const double> z) const {
  if (static_cast<int64_t>(z.size()) != input_dim()) {
    throw Error("shape", "head input of size " + std::to_string(z.size()) + " vs " +
                             std::to_string(input_dim()));
  }
  std::vector<std::vector<double>> pre;
  std::vector<double> act(z.begin(), z.end());
  for (size_t n = 0; n < layers_.size(); ++n) {
    const Layer &l = layers_[n];
    std::vector<double> y(l.b);
    for (int64_t i = 0; i < l.in; ++i) {
      const double a = act[i];
      const double *row = l.w.data() + i * l.out;
      for (int64_t j = 0; j < l.out; ++j) y[j] += a * row[j];
    }
    pre.push_back(y);
    if (n + 1 < layers_.size()) {
      for (double &v : y) v = v > 0.0 ? v : slope_ * v;
    }
    act = std::move(y);
  }
  return pre;
}

std::vector<double> MlpHead::Logits(std::span<const double> z) const { return Forward(z).back(); }

std::vector<double> MlpHead::Probabilities(std::span<const double> z) const {
  std::vector<double> p = Logits(z);
  for (double &v : p) v = 1.0 / (1.0 + std::exp(-v));
  return p;
}

double MlpHead::Bce(std::span<const double> z, std::span<const double> target,
                    std::vector<double> *grad_z, std::vector<double> *probs) const {
  std::vector<std::vector<double>> pre = Forward(z);
  const std::vector<double> &logits = pre.back();
  const size_t k = logits.size();
  if (target.size() != k) throw Error("shape", "critique target length mismatch");

  double loss = 0.0;
  std::vector<double> delta(k);
  if (probs != nullptr) probs->resize(k);
  for (size_t j = 0; j < k; ++j) {
    const double x = logits[j];
    // log(1 + exp(-|x|)) + max(x, 0) - x t
    loss += std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0) - x * target[j];
    const double p = 1.0 / (1.0 + std::exp(-x));
    delta[j] = (p - target[j]) / static_cast<double>(k);
    if (probs != nullptr) (*probs)[j] = p;
  }
  loss /= static_cast<double>(k);
  if (grad_z == nullptr) return loss;

  for (size_t n = layers_.size(); n-- > 0;) {
    const Layer &l = layers_[n];
    std::vector<double> down(l.in, 0.0);
    for (int64_t i = 0; i < l.in; ++i) {
      const double *row = l.w.data() + i * l.out;
      double acc = 0.0;
      for (int64_t j = 0; j < l.out; ++j) acc += row[j] * delta[j];
      down[i] = acc;
    }
    if (n > 0) {
      const std::vector<double> &below = pre[n - 1];
      for (int64_t i = 0; i < l.in; ++i) down[i] *= below[i] > 0.0 ? 1.0 : slope_;
    }
    delta = std::move(down);
  }
  *grad_z = std::move(delta);
  return loss;
}

}  // namespace critrec
