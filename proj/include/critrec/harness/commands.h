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

#ifndef CRITREC_HARNESS_COMMANDS_H_
#define CRITREC_HARNESS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "critrec/common/error.h"
#include "critrec/critique/critique.h"
#include "critrec/model/dataset.h"
#include "critrec/model/hyperparams.h"
#include "critrec/model/token_vocab.h"
#include "critrec/service/http_service.h"

namespace critrec {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Configuration and usage errors map to kExitUsage, everything else to
// kExitRuntime.
int ExitCodeFor(const Error &error);

struct SynthCommand {
  std::string config_path;  // optional JSON: {"synthetic": {...}, "corpus": {...}}
  std::string out_dir;
  std::optional<uint64_t> seed;
  std::vector<std::string> argv;
};

struct TrainCommand {
  std::string corpus_dir;
  std::string checkpoint;
  std::string log_path;     // default: <checkpoint>.log.jsonl
  std::string config_path;  // optional JSON of hyperparameter overrides
  bool paper_profile = false;
  std::optional<int64_t> epochs;
  std::optional<int64_t> d_model;
  std::optional<double> lambda_r, lambda_kp, lambda_just;
  std::optional<uint64_t> seed;
  std::vector<std::string> argv;
};

struct EvalCommand {
  std::string checkpoint;
  std::string corpus_dir;
  std::string protocol;  // rank | fmap | multistep | loo
  std::string out_dir;
  uint64_t seed = 1;
  std::vector<int64_t> cutoffs = {5, 10, 20};
  int64_t pairs = 500;
  int64_t steps = 5;
  int64_t users = 200;
  int64_t negatives = 49;
  int64_t text_examples = 200;
  CritiqueParams critique;
  std::vector<std::string> argv;
};

struct ServeCommand {
  ServiceConfig service;
  std::string manifest_path;  // default: serve.manifest.json next to the checkpoint
  std::vector<std::string> argv;
};

// Each command writes exactly one manifest, also on failure, and rethrows
// errors after recording them. Progress goes to `log`.
void RunSynth(const SynthCommand &cmd, std::ostream &log);
void RunTrain(const TrainCommand &cmd, std::ostream &log);
void RunEval(const EvalCommand &cmd, std::ostream &log);
void RunServe(const ServeCommand &cmd, std::ostream &log);

// Base profile, then the config file, then individual flags.
HyperParams ResolveHyperParams(const TrainCommand &cmd);

// Rebuilds the model-facing view of a corpus directory.
ModelData LoadModelData(const std::string &corpus_dir, const TokenVocab &tokens,
                        const HyperParams &hyper);

}  // namespace critrec

#endif  // CRITREC_HARNESS_COMMANDS_H_
