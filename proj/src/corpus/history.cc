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

#include "critrec/corpus/history.h"

#include "critrec/common/error.h"
#include "critrec/common/rng.h"

namespace critrec {

JustificationReference BuildHistory(const std::string &owner,
                                    const std::vector<Justification> &pool, size_t n_just,
                                    uint64_t seed) {
  if (pool.empty()) throw Error("no-justifications", owner + " has no training justifications");
  Rng rng(MixSeed(seed, owner));
  JustificationReference ref;
  ref.owner = owner;
  ref.justifications.reserve(n_just);
  if (pool.size() >= n_just) {
    for (size_t idx : rng.SampleWithoutReplacement(pool.size(), n_just)) {
      ref.justifications.push_back(pool[idx]);
    }
  } else {
    for (size_t i = 0; i < n_just; ++i) ref.justifications.push_back(pool[rng.Index(pool.size())]);
  }
  return ref;
}

}  // namespace critrec
