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

#ifndef CRITREC_NUMERICS_ADAM_H_
#define CRITREC_NUMERICS_ADAM_H_

#include <cstdint>
#include <map>
#include <string>

#include "critrec/numerics/param_store.h"

namespace critrec {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  int64_t step = 0;
  std::map<std::string, Tensor> first_moment;
  std::map<std::string, Tensor> second_moment;
};

// One bias-corrected Adam update of every parameter that has a gradient.
// Parameters absent from `grads` are left alone, but the step counter is
// shared.
void AdamStep(ParamStore &params, const GradMap &grads, AdamState &state, double lr);

}  // namespace critrec

#endif  // CRITREC_NUMERICS_ADAM_H_
