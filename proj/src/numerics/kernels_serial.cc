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
#include <atomic>
#include <vector>

#include "attention_body.h"
#include "critrec/numerics/kernels.h"

namespace critrec::kernels {

int64_t AttentionLayout::ProbabilityCount() const {
  return internal::ProbabilityOffsets(*this).back();
}

namespace serial {

void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
            bool accumulate) {
  if (!accumulate) std::fill(c, c + n * m, Real(0));
  for (int64_t i = 0; i < n; ++i) {
    Real *ci = c + i * m;
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
  for (int64_t j = 0; j < m; ++j)
    for (int64_t r = 0; r < k; ++r) bt[r * m + j] = b[j * k + r];
  MatMul(n, k, m, a, bt.data(), c, accumulate);
}

void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate) {
  if (!accumulate) std::fill(c, c + n * m, Real(0));
  for (int64_t i = 0; i < n; ++i) {
    Real *ci = c + i * m;
    for (int64_t r = 0; r < k; ++r) {
      const Real ari = a[r * n + i];
      const Real *br = b + r * m;
      for (int64_t j = 0; j < m; ++j) ci[j] += ari * br[j];
    }
  }
}

void AttentionForward(const AttentionArgs &args, Real *out, Real *probs) {
  const auto offsets = internal::ProbabilityOffsets(*args.layout);
  for (int64_t s = 0; s < args.layout->segments(); ++s) {
    internal::ForwardSegment(args, s, offsets[s], out, probs);
  }
}

void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v) {
  const auto offsets = internal::ProbabilityOffsets(*args.layout);
  for (int64_t s = 0; s < args.layout->segments(); ++s) {
    internal::BackwardSegment(args, s, offsets[s], probs, grad_out, grad_q, grad_k, grad_v);
  }
}

}  // namespace serial

namespace {
std::atomic<Mode> g_mode{Mode::kAuto};
constexpr int64_t kParallelWork = 1 << 16;

bool UseParallel(int64_t work) {
  switch (g_mode.load()) {
    case Mode::kSerial:
      return false;
    case Mode::kParallel:
      return true;
    case Mode::kAuto:
      break;
  }
  return work >= kParallelWork;
}
}  // namespace

void SetMode(Mode mode) { g_mode.store(mode); }
Mode GetMode() { return g_mode.load(); }

void MatMul(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
            bool accumulate) {
  if (UseParallel(n * k * m)) {
    parallel::MatMul(n, k, m, a, b, c, accumulate);
  } else {
    serial::MatMul(n, k, m, a, b, c, accumulate);
  }
}

void MatMulTransB(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate) {
  if (UseParallel(n * k * m)) {
    parallel::MatMulTransB(n, k, m, a, b, c, accumulate);
  } else {
    serial::MatMulTransB(n, k, m, a, b, c, accumulate);
  }
}

void MatMulTransA(int64_t n, int64_t k, int64_t m, const Real *a, const Real *b, Real *c,
                  bool accumulate) {
  if (UseParallel(n * k * m)) {
    parallel::MatMulTransA(n, k, m, a, b, c, accumulate);
  } else {
    serial::MatMulTransA(n, k, m, a, b, c, accumulate);
  }
}

void AttentionForward(const AttentionArgs &args, Real *out, Real *probs) {
  if (UseParallel(args.layout->ProbabilityCount() * args.dim)) {
    parallel::AttentionForward(args, out, probs);
  } else {
    serial::AttentionForward(args, out, probs);
  }
}

void AttentionBackward(const AttentionArgs &args, const Real *probs, const Real *grad_out,
                       Real *grad_q, Real *grad_k, Real *grad_v) {
  if (UseParallel(args.layout->ProbabilityCount() * args.dim)) {
    parallel::AttentionBackward(args, probs, grad_out, grad_q, grad_k, grad_v);
  } else {
    serial::AttentionBackward(args, probs, grad_out, grad_q, grad_k, grad_v);
  }
}

}  // namespace critrec::kernels
