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

#ifndef CRITREC_MODEL_HYPERPARAMS_H_
#define CRITREC_MODEL_HYPERPARAMS_H_

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace critrec {

struct HyperParams {
  int64_t d_model = 256;
  int64_t d_ff = 1024;
  int64_t n_layers = 2;
  int64_t n_heads = 4;
  double dropout = 0.1;
  int64_t batch = 128;
  double lr = 1e-3;  // peak of the warm-up schedule
  int64_t warmup = 4000;
  double label_smoothing = 0.1;
  double lambda_r = 1.0;
  double lambda_kp = 1.0;
  double lambda_just = 1.0;
  int64_t n_just = 32;
  int64_t max_just_len = 16;
  std::vector<int64_t> head_dims = {128, 64};
  double leaky_slope = 0.2;
  int64_t d_z = 256;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.98;
  double adam_epsilon = 1e-9;
  int64_t epochs = 20;
  int64_t patience = 3;
  // Size of the displayed / critiqued keyphrase set.
  int64_t display_keyphrases = 10;
  uint64_t seed = 1;

  // Full-size configuration.
  static HyperParams Paper();
  // Laptop-scale configuration used by tests and the default CLI profile.
  static HyperParams Desk();

  // Throws Error("invalid-config") naming the field.
  void Validate() const;
};

void to_json(nlohmann::json &j, const HyperParams &hp);
void from_json(const nlohmann::json &j, HyperParams &hp);

}  // namespace critrec

#endif  // CRITREC_MODEL_HYPERPARAMS_H_
