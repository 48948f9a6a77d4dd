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

#ifndef CRITREC_NUMERICS_PARAM_STORE_H_
#define CRITREC_NUMERICS_PARAM_STORE_H_

#include <map>
#include <string>
#include <vector>

#include "critrec/numerics/tensor.h"

namespace critrec {

// Named parameter tensors kept in insertion order; the order is the
// checkpoint payload order.
class ParamStore {
 public:
  Tensor &Add(const std::string &name, Tensor value);
  bool Contains(const std::string &name) const { return index_.count(name) > 0; }
  Tensor &Get(const std::string &name);
  const Tensor &Get(const std::string &name) const;

  const std::vector<std::string> &names() const { return names_; }
  size_t size() const { return names_.size(); }
  int64_t TotalElements() const;
  // Order-sensitive FNV digest of all payload bytes.
  uint64_t Checksum() const;

  bool operator==(const ParamStore &other) const;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::map<std::string, size_t> index_;
};

using GradMap = std::map<std::string, Tensor>;

}  // namespace critrec

#endif  // CRITREC_NUMERICS_PARAM_STORE_H_
