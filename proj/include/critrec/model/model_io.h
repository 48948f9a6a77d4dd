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

#ifndef CRITREC_MODEL_MODEL_IO_H_
#define CRITREC_MODEL_MODEL_IO_H_

#include <string>

#include "critrec/model/engine.h"

namespace critrec {

// Bundle assembled from a trained network and the data it was trained on.
ModelBundle MakeBundle(Network network, const TokenVocab &tokens,
                       const KeyphraseVocabulary &keyphrases, const ModelData &data);

// Writes the parameters plus vocabularies, hyperparameters, entity tables
// and histories into one checkpoint file.
void SaveModel(const std::string &path, const ModelBundle &bundle,
               const nlohmann::json &extra_metadata = nlohmann::json::object());
ModelBundle LoadModel(const std::string &path, nlohmann::json *extra_metadata = nullptr);

}  // namespace critrec

#endif  // CRITREC_MODEL_MODEL_IO_H_
