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

#ifndef CRITREC_TESTS_ACCEPTANCE_GRADIENTS_H_
#define CRITREC_TESTS_ACCEPTANCE_GRADIENTS_H_

#include <cstdint>
#include <string>

namespace acceptance {

struct GradientCheckSummary {
  int configs = 0;
  int64_t checked_z = 0;
  int64_t checked_weights = 0;
  int64_t below_floor = 0;  // entries too small for a relative comparison
  double max_error_z = 0.0;
  double max_error_weights = 0.0;
  double seconds = 0.0;
  // Worst weight entry: "name[index] numeric analytic".
  std::string worst_weight;
};

// Finite-difference check of the joint loss in double precision, over
// `configs` randomly sized toy networks.
GradientCheckSummary RunGradientChecks(int configs, uint64_t seed);

}  // namespace acceptance

#endif  // CRITREC_TESTS_ACCEPTANCE_GRADIENTS_H_
