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

#include "critrec/numerics/tape.h"

#include <cstring>

#include "critrec/common/error.h"
#include "critrec/common/rng.h"

namespace critrec {

namespace {
const Tensor kEmpty;
}

const Tensor &Var::value() const { return tape_->value(id_); }

const Tensor &Var::grad() const {
  const Tensor &g = tape_->grad(id_);
  return g.empty() ? kEmpty : g;
}

Tensor &ParamStore::Add(const std::string &name, Tensor value) {
  if (index_.count(name)) throw Error("duplicate-param", name);
  index_[name] = tensors_.size();
  names_.push_back(name);
  tensors_.push_back(std::move(value));
  return tensors_.back();
}

Tensor &ParamStore::Get(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown-param", name);
  return tensors_[it->second];
}

const Tensor &ParamStore::Get(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error("unknown-param", name);
  return tensors_[it->second];
}

int64_t ParamStore::TotalElements() const {
  int64_t n = 0;
  for (const Tensor &t : tensors_) n += t.size();
  return n;
}

uint64_t ParamStore::Checksum() const {
  uint64_t h = 1469598103934665603ULL;
  for (const Tensor &t : tensors_) {
    const auto *bytes = reinterpret_cast<const unsigned char *>(t.data());
    for (size_t i = 0; i < t.storage().size() * sizeof(Real); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

bool ParamStore::operator==(const ParamStore &other) const {
  return names_ == other.names_ && tensors_ == other.tensors_;
}

Var Tape::Constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, nullptr, {}});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Input(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, true, nullptr, {}});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Param(const std::string &name, const Tensor &value) {
  nodes_.push_back(Node{value, {}, true, nullptr, name});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Record(Tensor value, const std::vector<Var> &inputs, BackwardFn backward) {
  bool needs = false;
  for (const Var &v : inputs) {
    if (v.tape() != this) throw Error("contract", "operand recorded on another tape");
    needs = needs || nodes_[v.id()].requires_grad;
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = needs;
  if (needs) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor &Tape::GradRef(int id) {
  Node &node = nodes_[id];
  if (node.grad.empty() && !node.value.empty()) node.grad = Tensor(node.value.shape());
  return node.grad;
}

void Tape::Backward(Var output) {
  if (output.tape() != this) throw Error("contract", "output recorded on another tape");
  if (value(output.id()).size() != 1) {
    throw Error("contract", "backward needs a scalar output, got " +
                                ShapeToString(value(output.id()).shape()));
  }
  if (backward_done_) throw Error("contract", "tape already swept");
  backward_done_ = true;
  GradRef(output.id()).Fill(Real(1));
  for (int id = output.id(); id >= 0; --id) {
    Node &node = nodes_[id];
    if (!node.requires_grad || !node.backward || node.grad.empty()) continue;
    node.backward(*this, node.grad);
  }
}

GradMap Tape::ParamGrads() const {
  GradMap grads;
  for (const Node &node : nodes_) {
    if (node.param_name.empty()) continue;
    auto it = grads.find(node.param_name);
    if (it == grads.end()) {
      grads.emplace(node.param_name,
                    node.grad.empty() ? Tensor(node.value.shape()) : node.grad);
    } else if (!node.grad.empty()) {
      for (int64_t i = 0; i < node.grad.size(); ++i) it->second[i] += node.grad[i];
    }
  }
  return grads;
}

}  // namespace critrec
