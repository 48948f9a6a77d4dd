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

#ifndef CRITREC_NUMERICS_KERNELS_H_
#define CRITREC_NUMERICS_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "critrec/common/real.h"

namespace critrec::kernels {

// Row-major dense products. When `accumulate` is false the output is
// overwritten. Every kernel exists twice: a serial reference and an
// OpenMP version that parallelizes over output rows. Both visit the
// reduction dimension in the same order, so their results are bitwise equal.
//
//   MatMul:       C[n,m] (+)= A[n,k]  * B[k,m]
//   MatMulTransB: C[n,m] (+)= A[n,k]  * B[m,k]^T
//   MatMulTransA: C[n,m] (+)= A[k,n]^T * B[k,m]

// Segment-wise multi-head scaled dot-product attention. Segment s owns query
// rows [q_offsets[s], q_offsets[s+1]) and key rows [k_offsets[s],
// k_offsets[s+1]); queries only see keys of their own segment.
struct AttentionLayout {
  std::vector<int64_t> q_offsets;
  std::vector<int64_t> k_offsets;
  int64_t heads = 1;
  bool causal = false;
  // Optional explicit [q_rows, k_rows] allow-mask (1 = visible). Only valid
  // with a single segment.
  std::vector<uint8_t> mask;

  int64_t segments() const { return static_cast<int64_t>(q_offsets.size()) - 1; }
  // Total number of stored probabilities across segments and heads.
  int64_t ProbabilityCount() const;
};

struct AttentionArgs {
  const Real *q;
  const Real *k;
  const Real *v;
  int64_t dim;  // model width; head width is dim / heads
  const AttentionLayout *layout;
};

namespace serial {
void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c, bool accumulate);
void MatMulTransB(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
// probs receives the softmax weights needed by the backward pass.
void AttentionForward(const AttentionArgs &args, Real *out, Real *probs);
void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v);
}  // namespace serial

namespace parallel {
void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c, bool accumulate);
void MatMulTransB(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
void AttentionForward(const AttentionArgs &args, Real *out, Real *probs);
void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v);
}  // namespace parallel

enum class Mode { kAuto, kSerial, kParallel };

// Process-wide kernel selection; kAuto picks the parallel path for large
// problems. Intended for tests and benchmarks.
void SetMode(Mode mode);
Mode GetMode();

void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c, bool accumulate);
void MatMulTransB(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate);
void AttentionForward(const AttentionArgs &args, Real *out, Real *probs);
void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v);

}  // namespace critrec::kernels

#endif  // CRITREC_NUMERICS_KERNELS_H_
