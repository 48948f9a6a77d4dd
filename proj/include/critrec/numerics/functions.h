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

#ifndef CRITREC_NUMERICS_FUNCTIONS_H_
#define CRITREC_NUMERICS_FUNCTIONS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "critrec/common/real.h"

namespace critrec {

// Max-subtracted softmax; entries positive and summing to one.
std::vector<Real> Softmax(std::span<const Real> values);

// Cross-entropy of softmax(logits) against the smoothed distribution that
// puts 1 - epsilon on `target` and epsilon / (V - 1) on every other entry.
double LabelSmoothedCe(std::span<const Real> logits, int64_t target, double epsilon);

double SigmoidOf(double x);

// Inverse-square-root schedule with linear warm-up:
//   scale * d_model^-0.5 * min(step^-0.5, step * warmup^-1.5)
// peaking at step == warmup.
double NoamLr(int64_t step, int64_t warmup, int64_t d_model, double scale);

// Scale for which NoamLr peaks at `peak_lr`.
double NoamScaleForPeak(double peak_lr, int64_t warmup, int64_t d_model);

}  // namespace critrec

#endif  // CRITREC_NUMERICS_FUNCTIONS_H_
