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

#include "critrec/harness/manifest.h"

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "critrec/common/error.h"
#include "critrec/corpus/corpus_io.h"

namespace critrec {

namespace fs = std::filesystem;

namespace {

std::string Sha1Hex(const std::string &bytes) {
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char *>(bytes.data()), bytes.size(), digest);
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out += kHex[c >> 4];
    out += kHex[c & 15];
  }
  return out;
}

std::string ReadAll(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string GitBlobSha1(const std::string &bytes) {
  std::string object = "blob " + std::to_string(bytes.size());
  object.push_back('\0');
  object += bytes;
  return Sha1Hex(object);
}

std::string GitBlobSha1OfFile(const std::string &path) { return GitBlobSha1(ReadAll(path)); }

std::string HashInputs(const std::vector<std::string> &paths) {
  std::vector<std::string> lines;
  for (const std::string &p : paths) {
    if (fs::is_directory(p)) {
      for (const auto &f : fs::recursive_directory_iterator(p)) {
        if (f.is_regular_file()) {
          lines.push_back(GitBlobSha1OfFile(f.path().string()) + " " + f.path().string());
        }
      }
    } else {
      lines.push_back(GitBlobSha1OfFile(p) + " " + p);
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string joined;
  for (const std::string &l : lines) joined += l + "\n";
  return Sha1Hex(joined);
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::ToJson() const {
  return {{"command", command},         {"argv", argv},
          {"config", config},           {"seed", seed},
          {"started_at", started_at},   {"finished_at", finished_at},
          {"inputs", inputs},           {"input_hash", input_hash},
          {"outputs", outputs},         {"status", status},
          {"summary", summary}};
}

RunManifest RunManifest::FromJson(const nlohmann::json &j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.value("argv", std::vector<std::string>{});
  m.config = j.value("config", nlohmann::json::object());
  m.seed = j.value("seed", uint64_t{0});
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  m.inputs = j.value("inputs", std::vector<std::string>{});
  m.input_hash = j.value("input_hash", "");
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.status = j.value("status", "");
  m.summary = j.value("summary", nlohmann::json::object());
  return m;
}

void WriteManifest(const std::string &path, const RunManifest &manifest) {
  WriteJsonFile(path, manifest.ToJson());
}

RunManifest ReadManifest(const std::string &path) {
  return RunManifest::FromJson(ReadJsonFile(path));
}

}  // namespace critrec
