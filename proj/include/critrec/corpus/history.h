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

#ifndef CRITREC_CORPUS_HISTORY_H_
#define CRITREC_CORPUS_HISTORY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "critrec/corpus/markers.h"

namespace critrec {

// Fixed-size justification sample describing one user or item.
struct JustificationReference {
  std::string owner;
  std::vector<Justification> justifications;
};

// Exactly n_just entries: sampled without replacement when the pool is large
// enough, with replacement otherwise. The draw depends only on (seed, owner).
// Throws Error("no-justifications") for an empty pool.
JustificationReference BuildHistory(const std::string &owner,
                                    const std::vector<Justification> &pool, size_t n_just,
                                    uint64_t seed);

}  // namespace critrec

#endif  // CRITREC_CORPUS_HISTORY_H_
