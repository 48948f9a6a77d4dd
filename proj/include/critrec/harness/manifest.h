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

#ifndef CRITREC_HARNESS_MANIFEST_H_
#define CRITREC_HARNESS_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace critrec {

// SHA-1 of "blob <size>\0<bytes>", as git computes object ids.
std::string GitBlobSha1(const std::string &bytes);
std::string GitBlobSha1OfFile(const std::string &path);

// Hash over a set of input files: SHA-1 of the sorted "<blob sha> <path>\n"
// lines. Directories contribute every regular file below them.
std::string HashInputs(const std::vector<std::string> &paths);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();
  uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> inputs;
  std::string input_hash;
  std::vector<std::string> outputs;
  std::string status = "running";
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json ToJson() const;
  static RunManifest FromJson(const nlohmann::json &j);
};

// UTC time as 2026-01-31T12:00:00Z.
std::string UtcTimestamp();

void WriteManifest(const std::string &path, const RunManifest &manifest);
RunManifest ReadManifest(const std::string &path);

}  // namespace critrec

#endif  // CRITREC_HARNESS_MANIFEST_H_
