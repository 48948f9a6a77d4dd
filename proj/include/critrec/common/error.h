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

#ifndef CRITREC_COMMON_ERROR_H_
#define CRITREC_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace critrec {

// Exception carrying a stable machine-readable code ("unknown-entity",
// "insufficient-vocabulary", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message);

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace critrec

#endif  // CRITREC_COMMON_ERROR_H_
