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

#include "critrec/model/hyperparams.h"

#include "critrec/common/error.h"

namespace critrec {

HyperParams HyperParams::Paper() { return HyperParams{}; }

HyperParams HyperParams::Desk() {
  HyperParams hp;
  hp.d_model = 64;
  hp.d_z = 64;
  hp.d_ff = 256;
  hp.n_just = 4;
  hp.max_just_len = 12;
  hp.batch = 32;
  hp.lr = 3e-3;
  hp.warmup = 100;
  hp.epochs = 10;
  // The keyphrase term is a mean over K outputs; at this scale it needs the
  // extra weight to compete with the token loss for the shared latent.
  hp.lambda_kp = 10.0;
  return hp;
}

void HyperParams::Validate() const {
  auto require = [](bool ok, const char *field, const char *why) {
    if (!ok) throw Error("invalid-config", std::string(field) + ": " + why);
  };
  require(d_model > 0, "d_model", "must be positive");
  require(n_heads > 0 && d_model % n_heads == 0, "n_heads", "must divide d_model");
  require(d_z == d_model, "d_z", "must equal d_model (z and the aspect embedding are added)");
  require(d_ff > 0, "d_ff", "must be positive");
  require(n_layers > 0, "n_layers", "must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout", "must lie in [0, 1)");
  require(batch > 0, "batch", "must be positive");
  require(lr > 0.0, "lr", "must be positive");
  require(warmup > 0, "warmup", "must be positive");
  require(label_smoothing >= 0.0 && label_smoothing < 1.0, "label_smoothing", "must lie in [0, 1)");
  require(lambda_r >= 0.0, "lambda_r", "must be non-negative");
  require(lambda_kp >= 0.0, "lambda_kp", "must be non-negative");
  require(lambda_just >= 0.0, "lambda_just", "must be non-negative");
  require(n_just > 0, "n_just", "must be positive");
  require(max_just_len > 0, "max_just_len", "must be positive");
  require(!head_dims.empty(), "head_dims", "must be nonempty");
  require(epochs > 0, "epochs", "must be positive");
  require(display_keyphrases > 0, "display_keyphrases", "must be positive");
}

void to_json(nlohmann::json &j, const HyperParams &hp) {
  j = nlohmann::json{{"d_model", hp.d_model},       {"d_ff", hp.d_ff},
                     {"n_layers", hp.n_layers},     {"n_heads", hp.n_heads},
                     {"dropout", hp.dropout},       {"batch", hp.batch},
                     {"lr", hp.lr},                 {"warmup", hp.warmup},
                     {"label_smoothing", hp.label_smoothing},
                     {"lambda_r", hp.lambda_r},     {"lambda_kp", hp.lambda_kp},
                     {"lambda_just", hp.lambda_just}, {"n_just", hp.n_just},
                     {"max_just_len", hp.max_just_len}, {"head_dims", hp.head_dims},
                     {"leaky_slope", hp.leaky_slope}, {"d_z", hp.d_z},
                     {"adam_beta1", hp.adam_beta1}, {"adam_beta2", hp.adam_beta2},
                     {"adam_epsilon", hp.adam_epsilon}, {"epochs", hp.epochs},
                     {"patience", hp.patience},     {"display_keyphrases", hp.display_keyphrases},
                     {"seed", hp.seed}};
}

void from_json(const nlohmann::json &j, HyperParams &hp) {
  auto read = [&j](const char *key, auto &field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  read("d_model", hp.d_model);
  read("d_ff", hp.d_ff);
  read("n_layers", hp.n_layers);
  read("n_heads", hp.n_heads);
  read("dropout", hp.dropout);
  read("batch", hp.batch);
  read("lr", hp.lr);
  read("warmup", hp.warmup);
  read("label_smoothing", hp.label_smoothing);
  read("lambda_r", hp.lambda_r);
  read("lambda_kp", hp.lambda_kp);
  read("lambda_just", hp.lambda_just);
  read("n_just", hp.n_just);
  read("max_just_len", hp.max_just_len);
  read("head_dims", hp.head_dims);
  read("leaky_slope", hp.leaky_slope);
  read("d_z", hp.d_z);
  read("adam_beta1", hp.adam_beta1);
  read("adam_beta2", hp.adam_beta2);
  read("adam_epsilon", hp.adam_epsilon);
  read("epochs", hp.epochs);
  read("patience", hp.patience);
  read("display_keyphrases", hp.display_keyphrases);
  read("seed", hp.seed);
}

}  // namespace critrec
