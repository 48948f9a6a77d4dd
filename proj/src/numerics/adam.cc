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

#include "critrec/numerics/adam.h"

#include <cmath>

#include "critrec/common/error.h"

namespace critrec {

void AdamStep(ParamStore &params, const GradMap &grads, AdamState &state, double lr) {
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (const auto &[name, grad] : grads) {
    Tensor &p = params.Get(name);
    if (p.shape() != grad.shape()) {
      throw Error("shape", "adam: " + name + " " + ShapeToString(p.shape()) + " vs grad " +
                               ShapeToString(grad.shape()));
    }
    auto [m_it, m_new] = state.first_moment.try_emplace(name, Tensor(p.shape()));
    auto [v_it, v_new] = state.second_moment.try_emplace(name, Tensor(p.shape()));
    Tensor &m = m_it->second;
    Tensor &v = v_it->second;
    for (int64_t i = 0; i < p.size(); ++i) {
      const double g = grad[i];
      const double mi = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      const double vi = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      m[i] = static_cast<Real>(mi);
      v[i] = static_cast<Real>(vi);
      p[i] -= static_cast<Real>(lr * (mi / c1) / (std::sqrt(vi / c2) + state.epsilon));
    }
  }
}

}  // namespace critrec
