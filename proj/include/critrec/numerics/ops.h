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

#ifndef CRITREC_NUMERICS_OPS_H_
#define CRITREC_NUMERICS_OPS_H_

#include <cstdint>
#include <vector>

#include "critrec/common/rng.h"
#include "critrec/numerics/kernels.h"
#include "critrec/numerics/tape.h"

namespace critrec::ops {

// Differentiable primitives. Matrices are [rows, cols]; vectors act as a
// single row where a row is expected.

Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
// x[n, m] + bias[m] broadcast over rows.
Var AddRow(Var x, Var bias);
Var Mul(Var a, Var b);
Var Scale(Var x, Real factor);
Var Sigmoid(Var x);
Var Relu(Var x);
Var LeakyRelu(Var x, Real slope);
Var Linear(Var x, Var weight, Var bias);

// out[i] = x[index[i]]; the backward pass scatter-adds.
Var GatherRows(Var x, std::vector<int64_t> index);
// Mean of rows [offsets[s], offsets[s+1]) per segment; empty segments give
// zero rows.
Var SegmentMean(Var x, std::vector<int64_t> offsets);
Var ConcatCols(const std::vector<Var> &parts);
Var LayerNorm(Var x, Var gain, Var bias, Real eps = Real(1e-5));
Var Attention(Var q, Var k, Var v, kernels::AttentionLayout layout);
// Single-head softmax(Q K^T / sqrt(d) + mask) V. `mask` is [q_rows, k_rows],
// 1 = visible; pass an empty vector for no mask.
Var ScaledDotAttention(Var q, Var k, Var v, const std::vector<uint8_t> &mask = {});
// Inverted dropout; identity when p == 0.
Var Dropout(Var x, Real p, Rng &rng);

Var Sum(Var x);
Var Mean(Var x);

// Mean squared error against a fixed target of the same shape.
Var MseLoss(Var prediction, const Tensor &target);
// Mean binary cross-entropy of sigmoid(logits) against {0,1} targets.
Var BceWithLogits(Var logits, const Tensor &targets);
// Mean label-smoothed cross-entropy over rows of logits[T, V]; rows whose
// target is negative are ignored.
Var LabelSmoothedCrossEntropy(Var logits, const std::vector<int64_t> &targets, Real epsilon);

}  // namespace critrec::ops

#endif  // CRITREC_NUMERICS_OPS_H_
