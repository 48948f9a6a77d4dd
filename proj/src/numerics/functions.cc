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

#include "critrec/numerics/functions.h"

#include <algorithm>
#include <cmath>

#include "critrec/common/error.h"

namespace critrec {

std::vector<Real> Softmax(std::span<const Real> values) {
  std::vector<Real> out(values.size());
  if (values.empty()) return out;
  const double max_v = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  std::vector<double> e(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    e[i] = std::exp(values[i] - max_v);
    total += e[i];
  }
  for (size_t i = 0; i < values.size(); ++i) out[i] = static_cast<Real>(e[i] / total);
  return out;
}

double LabelSmoothedCe(std::span<const Real> logits, int64_t target, double epsilon) {
  const int64_t vocab = static_cast<int64_t>(logits.size());
  if (target < 0 || target >= vocab) throw Error("shape", "target outside the logits");
  if (epsilon < 0.0 || epsilon >= 1.0) throw Error("contract", "smoothing must be in [0, 1)");
  const double max_v = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (Real x : logits) z += std::exp(x - max_v);
  const double lse = max_v + std::log(z);
  const double off = vocab > 1 ? epsilon / static_cast<double>(vocab - 1) : 0.0;
  double loss = 0.0;
  for (int64_t c = 0; c < vocab; ++c) {
    const double q = c == target ? 1.0 - epsilon : off;
    loss -= q * (logits[c] - lse);
  }
  return loss;
}

double SigmoidOf(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double NoamLr(int64_t step, int64_t warmup, int64_t d_model, double scale) {
  if (step < 1 || warmup < 1 || d_model < 1) throw Error("contract", "noam_lr needs positive step");
  const double s = static_cast<double>(step);
  return scale / std::sqrt(static_cast<double>(d_model)) *
         std::min(1.0 / std::sqrt(s), s * std::pow(static_cast<double>(warmup), -1.5));
}

double NoamScaleForPeak(double peak_lr, int64_t warmup, int64_t d_model) {
  return peak_lr * std::sqrt(static_cast<double>(d_model)) * std::sqrt(static_cast<double>(warmup));
}

}  // namespace critrec
