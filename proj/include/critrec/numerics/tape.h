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

#ifndef CRITREC_NUMERICS_TAPE_H_
#define CRITREC_NUMERICS_TAPE_H_

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "critrec/numerics/param_store.h"
#include "critrec/numerics/tensor.h"

namespace critrec {

class Tape;

// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;
  Var(Tape *tape, int id) : tape_(tape), id_(id) {}

  bool valid() const { return tape_ != nullptr; }
  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  const Tensor &value() const;
  // Gradient after Tape::Backward; an empty tensor if none reached this node.
  const Tensor &grad() const;
  const Shape &shape() const { return value().shape(); }

 private:
  Tape *tape_ = nullptr;
  int id_ = -1;
};

// Records primitive operations in creation order and replays them backwards.
// Creation order is a topological order, so a single reverse sweep visits
// every node once. A tape is single-threaded; independent tapes can run
// concurrently.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape &, const Tensor &grad_out)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Tensor value);
  // A differentiable leaf that is not a model parameter (e.g. the latent z).
  Var Input(Tensor value);
  // A differentiable leaf whose gradient is reported under `name`.
  Var Param(const std::string &name, const Tensor &value);
  Var Record(Tensor value, const std::vector<Var> &inputs, BackwardFn backward);

  void Backward(Var output);

  const Tensor &value(int id) const { return nodes_[id].value; }
  const Tensor &grad(int id) const { return nodes_[id].grad; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  // Gradient buffer of node `id`, zero-initialized on first access.
  Tensor &GradRef(int id);

  // Parameter gradients summed over every use of each parameter.
  GradMap ParamGrads() const;
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
    std::string param_name;
  };

  std::deque<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace critrec

#endif  // CRITREC_NUMERICS_TAPE_H_
