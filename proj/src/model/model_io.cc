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

#include "critrec/model/model_io.h"

#include "critrec/common/error.h"
#include "critrec/numerics/checkpoint.h"

namespace critrec {

ModelBundle MakeBundle(Network network, const TokenVocab &tokens,
                       const KeyphraseVocabulary &keyphrases, const ModelData &data) {
  ModelBundle b{std::move(network), tokens,        keyphrases, data.users, data.items,
                data.user_histories, data.item_histories};
  return b;
}

void SaveModel(const std::string &path, const ModelBundle &bundle,
               const nlohmann::json &extra_metadata) {
  const Network &net = bundle.network;
  nlohmann::json meta;
  meta["kind"] = "critrec-model";
  meta["hyperparams"] = net.hyper();
  meta["token_vocabulary"] = bundle.tokens.tokens();
  meta["keyphrase_vocabulary"] = bundle.keyphrases;
  meta["keyphrase_tokens"] = net.keyphrase_tokens();
  meta["users"] = bundle.users.ids();
  meta["items"] = bundle.items.ids();
  meta["user_histories"] = bundle.user_histories;
  meta["item_histories"] = bundle.item_histories;
  meta["extra"] = extra_metadata;
  SaveCheckpoint(path, net.params(), meta);
}

ModelBundle LoadModel(const std::string &path, nlohmann::json *extra_metadata) {
  LoadedCheckpoint ckpt = LoadCheckpoint(path);
  const nlohmann::json &meta = ckpt.metadata;
  if (meta.value("kind", "") != "critrec-model") {
    throw Error("bad-format", path + " is not a model checkpoint");
  }
  HyperParams hp = meta.at("hyperparams").get<HyperParams>();
  TokenVocab tokens(meta.at("token_vocabulary").get<std::vector<std::string>>());
  KeyphraseVocabulary keyphrases = meta.at("keyphrase_vocabulary").get<KeyphraseVocabulary>();
  EntityTable users(meta.at("users").get<std::vector<std::string>>());
  EntityTable items(meta.at("items").get<std::vector<std::string>>());

  Network net(hp, users.size(), items.size(), tokens.size(),
              meta.at("keyphrase_tokens").get<std::vector<int64_t>>());
  for (const std::string &name : net.params().names()) {
    if (!ckpt.params.Contains(name)) throw Error("bad-format", "missing tensor " + name);
    const Tensor &src = ckpt.params.Get(name);
    Tensor &dst = net.params().Get(name);
    if (src.shape() != dst.shape()) {
      throw Error("bad-format", name + ": " + ShapeToString(src.shape()) + " vs " +
                                    ShapeToString(dst.shape()));
    }
    dst = src;
  }
  if (ckpt.params.size() != net.params().size()) {
    throw Error("bad-format", "unexpected tensors in checkpoint");
  }
  if (extra_metadata != nullptr) *extra_metadata = meta.value("extra", nlohmann::json::object());
  return ModelBundle{std::move(net),
                     std::move(tokens),
                     std::move(keyphrases),
                     std::move(users),
                     std::move(items),
                     meta.at("user_histories").get<std::vector<std::vector<TokenSeq>>>(),
                     meta.at("item_histories").get<std::vector<std::vector<TokenSeq>>>()};
}

}  // namespace critrec
