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

#include "critrec/numerics/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "critrec/common/error.h"

namespace critrec {

namespace {

constexpr char kMagic[8] = {'C', 'R', 'I', 'T', 'R', 'E', 'C', 'K'};

template <typename T>
void WriteLe(std::ostream &out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <typename T>
T ReadLe(std::istream &in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char *>(bytes), sizeof(T))) {
    throw Error("bad-checkpoint", "truncated file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void SaveCheckpoint(const std::string &path, const ParamStore &params,
                    const nlohmann::json &metadata) {
  nlohmann::json header;
  header["format_version"] = kCheckpointVersion;
  header["tensors"] = nlohmann::json::array();
  for (const std::string &name : params.names()) {
    header["tensors"].push_back({{"name", name}, {"shape", params.Get(name).shape()}});
  }
  header["metadata"] = metadata;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  WriteLe<uint32_t>(out, kCheckpointVersion);
  WriteLe<uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const std::string &name : params.names()) {
    for (Real v : params.Get(name).values()) WriteLe<float>(out, static_cast<float>(v));
  }
  if (!out) throw Error("io", "short write to " + path);
}

LoadedCheckpoint LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("bad-checkpoint", path + " is not a checkpoint");
  }
  const uint32_t version = ReadLe<uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error("bad-checkpoint", "unsupported format version " + std::to_string(version));
  }
  const uint64_t length = ReadLe<uint64_t>(in);
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) {
    throw Error("bad-checkpoint", "truncated header");
  }
  const nlohmann::json header = nlohmann::json::parse(text);

  LoadedCheckpoint loaded;
  loaded.metadata = header.at("metadata");
  for (const auto &entry : header.at("tensors")) {
    Shape shape = entry.at("shape").get<Shape>();
    std::vector<Real> values(NumElements(shape));
    for (Real &v : values) v = static_cast<Real>(ReadLe<float>(in));
    loaded.params.Add(entry.at("name").get<std::string>(), Tensor(std::move(shape), std::move(values)));
  }
  return loaded;
}

}  // namespace critrec
