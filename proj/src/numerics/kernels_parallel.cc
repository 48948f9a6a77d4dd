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

#include <algorithm>
#include <vector>

#include "attention_body.h"
#include "critrec/numerics/kernels.h"

namespace critrec::kernels::parallel {

void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
            bool accumulate) {
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    Real *ci = c + i * m;
    if (!accumulate) std::fill(ci, ci + m, Real(0));
    for (int64_t r = 0; r < k; ++r) {
      const Real air = a[i * k + r];
      const Real *br = b + r * m;
      for (int64_t j = 0; j < m; ++j) ci[j] += air * br[j];
    }
  }
}

void MatMulTransB(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate) {
  std::vector<Real> bt(k * m);
#pragma omp parallel for schedule(static)
  for (int64_t r = 0; r < k; ++r)
    for (int64_t j = 0; j < m; ++j) bt[r * m + j] = b[j * k + r];
  MatMul(n, k, m, a, bt.data(), c, accumulate);
}

void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate) {
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) {
    Real *ci = c + i * m;
    if (!accumulate) std::fill(ci, ci + m, Real(0));
    for (int64_t r = 0; r < k; ++r) {
      const Real ari = a[r * n + i];
      const Real *br = b + r * m;
      for (int64_t j = 0; j < m; ++j) ci[j] += ari * br[j];
    }
  }
}

void AttentionForward(const AttentionArgs &args, Real *out, Real *probs) {
  const auto offsets = internal::ProbabilityOffsets(*args.layout);
  const int64_t segments = args.layout->segments();
#pragma omp parallel for schedule(dynamic, 4)
  for (int64_t s = 0; s < segments; ++s) {
    internal::ForwardSegment(args, s, offsets[s], out, probs);
  }
}

void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v) {
  const auto offsets = internal::ProbabilityOffsets(*args.layout);
  const int64_t segments = args.layout->segments();
  // Segments own disjoint query and key rows, so the writes never overlap.
#pragma omp parallel for schedule(dynamic, 4)
  for (int64_t s = 0; s < segments; ++s) {
    internal::BackwardSegment(args, s, offsets[s], probs, grad_out, grad_q, grad_k, grad_v);
  }
}

}  // namespace critrec::kernels::parallel
