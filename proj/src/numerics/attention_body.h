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

#ifndef CRITREC_SRC_NUMERICS_ATTENTION_BODY_H_
#define CRITREC_SRC_NUMERICS_ATTENTION_BODY_H_

// Per-segment attention bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "critrec/numerics/kernels.h"

namespace critrec::kernels::internal {

inline std::vector<int64_t> ProbabilityOffsets(const AttentionLayout &layout) {
  std::vector<int64_t> offsets(layout.segments() + 1, 0);
  for (int64_t s = 0; s < layout.segments(); ++s) {
    const int64_t nq = layout.q_offsets[s + 1] - layout.q_offsets[s];
    const int64_t nk = layout.k_offsets[s + 1] - layout.k_offsets[s];
    offsets[s + 1] = offsets[s] + layout.heads * nq * nk;
  }
  return offsets;
}

inline bool Visible(const AttentionLayout &layout, int64_t i, int64_t j, int64_t nk) {
  if (layout.causal && j > i) return false;
  if (!layout.mask.empty() && !layout.mask[i * nk + j]) return false;
  return true;
}

inline void ForwardSegment(const AttentionArgs &args, int64_t s, int64_t prob_offset, Real *out,
                           Real *probs) {
  const AttentionLayout &layout = *args.layout;
  const int64_t d = args.dim;
  const int64_t dh = d / layout.heads;
  const int64_t q0 = layout.q_offsets[s], nq = layout.q_offsets[s + 1] - q0;
  const int64_t k0 = layout.k_offsets[s], nk = layout.k_offsets[s + 1] - k0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<double> scores(nk);
  for (int64_t h = 0; h < layout.heads; ++h) {
    const int64_t c0 = h * dh;
    for (int64_t i = 0; i < nq; ++i) {
      Real *p = probs + prob_offset + (h * nq + i) * nk;
      const Real *qi = args.q + (q0 + i) * d + c0;
      double max_score = -std::numeric_limits<double>::infinity();
      for (int64_t j = 0; j < nk; ++j) {
        if (!Visible(layout, i, j, nk)) continue;
        const Real *kj = args.k + (k0 + j) * d + c0;
        double dot = 0.0;
        for (int64_t c = 0; c < dh; ++c) dot += static_cast<double>(qi[c]) * kj[c];
        scores[j] = dot * scale;
        max_score = std::max(max_score, scores[j]);
      }
      Real *oi = out + (q0 + i) * d + c0;
      std::fill(oi, oi + dh, Real(0));
      if (max_score == -std::numeric_limits<double>::infinity()) {
        std::fill(p, p + nk, Real(0));
        continue;
      }
      double total = 0.0;
      for (int64_t j = 0; j < nk; ++j) {
        if (!Visible(layout, i, j, nk)) {
          scores[j] = 0.0;
          continue;
        }
        scores[j] = std::exp(scores[j] - max_score);
        total += scores[j];
      }
      for (int64_t j = 0; j < nk; ++j) {
        p[j] = static_cast<Real>(scores[j] / total);
        if (p[j] == Real(0)) continue;
        const Real *vj = args.v + (k0 + j) * d + c0;
        for (int64_t c = 0; c < dh; ++c) oi[c] += p[j] * vj[c];
      }
    }
  }
}

inline void BackwardSegment(const AttentionArgs &args, int64_t s, int64_t prob_offset,
                            const Real *probs, const Real *grad_out, Real *grad_q, Real *grad_k,
                            Real *grad_v) {
  const AttentionLayout &layout = *args.layout;
  const int64_t d = args.dim;
  const int64_t dh = d / layout.heads;
  const int64_t q0 = layout.q_offsets[s], nq = layout.q_offsets[s + 1] - q0;
  const int64_t k0 = layout.k_offsets[s], nk = layout.k_offsets[s + 1] - k0;
  const Real scale = static_cast<Real>(1.0 / std::sqrt(static_cast<double>(dh)));
  std::vector<double> dp(nk);
  for (int64_t h = 0; h < layout.heads; ++h) {
    const int64_t c0 = h * dh;
    for (int64_t i = 0; i < nq; ++i) {
      const Real *p = probs + prob_offset + (h * nq + i) * nk;
      const Real *go = grad_out + (q0 + i) * d + c0;
      double weighted = 0.0;
      for (int64_t j = 0; j < nk; ++j) {
        if (p[j] == Real(0)) {
          dp[j] = 0.0;
          continue;
        }
        const Real *vj = args.v + (k0 + j) * d + c0;
        Real *gvj = grad_v + (k0 + j) * d + c0;
        double dot = 0.0;
        for (int64_t c = 0; c < dh; ++c) {
          dot += static_cast<double>(go[c]) * vj[c];
          gvj[c] += p[j] * go[c];
        }
        dp[j] = dot;
        weighted += p[j] * dot;
      }
      const Real *qi = args.q + (q0 + i) * d + c0;
      Real *gqi = grad_q + (q0 + i) * d + c0;
      for (int64_t j = 0; j < nk; ++j) {
        if (p[j] == Real(0)) continue;
        const Real ds = static_cast<Real>(p[j] * (dp[j] - weighted)) * scale;
        const Real *kj = args.k + (k0 + j) * d + c0;
        Real *gkj = grad_k + (k0 + j) * d + c0;
        for (int64_t c = 0; c < dh; ++c) {
          gqi[c] += ds * kj[c];
          gkj[c] += ds * qi[c];
        }
      }
    }
  }
}

}  // namespace critrec::kernels::internal

#endif  // CRITREC_SRC_NUMERICS_ATTENTION_BODY_H_
