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

#ifndef CRITREC_NUMERICS_CHECKPOINT_H_
#define CRITREC_NUMERICS_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "critrec/numerics/param_store.h"

namespace critrec {

// Checkpoint layout:
//   8 bytes   magic "CRITRECK"
//   u32 LE    format version
//   u64 LE    header length in bytes
//   header    UTF-8 JSON {"format_version", "tensors": [{"name", "shape"}],
//             "metadata": {...}}
//   payload   float32 little-endian values of every tensor, in header order
inline constexpr uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const std::string &path, const ParamStore &params,
                    const nlohmann::json &metadata);

struct LoadedCheckpoint {
  ParamStore params;
  nlohmann::json metadata;
};

LoadedCheckpoint LoadCheckpoint(const std::string &path);

}  // namespace critrec

#endif  // CRITREC_NUMERICS_CHECKPOINT_H_
