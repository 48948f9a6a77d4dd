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

// Command-line entry point: synth, train, eval and serve.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "critrec/common/error.h"
#include "critrec/harness/commands.h"

namespace {

// Default data directory; individual paths override it.
std::string DataDir() {
  const char *dir = std::getenv("CRITREC_DATA_DIR");
  return dir != nullptr && *dir != '\0' ? dir : "data";
}

template <typename T>
void Optional(CLI::App *app, const std::string &name, std::optional<T> &target,
              const std::string &help) {
  app->add_option_function<T>(name, [&target](const T &v) { target = v; }, help);
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<std::string> args(argv, argv + argc);
  const std::string data = DataDir();

  CLI::App app{"Explainable recommender with keyphrase critiquing"};
  app.require_subcommand(1);

  critrec::SynthCommand synth;
  synth.out_dir = data + "/corpus";
  CLI::App *synth_cmd = app.add_subcommand("synth", "Generate a synthetic review corpus");
  synth_cmd->add_option("--config", synth.config_path, "JSON generator config");
  synth_cmd->add_option("--out", synth.out_dir, "Output corpus directory")->capture_default_str();
  Optional(synth_cmd, "--seed", synth.seed, "Generator seed");

  critrec::TrainCommand train;
  train.corpus_dir = data + "/corpus";
  train.checkpoint = data + "/model.ckpt";
  CLI::App *train_cmd = app.add_subcommand("train", "Train a model on a corpus directory");
  train_cmd->add_option("--corpus", train.corpus_dir, "Corpus directory")->capture_default_str();
  train_cmd->add_option("--out", train.checkpoint, "Checkpoint path")->capture_default_str();
  train_cmd->add_option("--log", train.log_path, "Epoch log (default <out>.log.jsonl)");
  train_cmd->add_option("--config", train.config_path, "JSON hyperparameter overrides");
  train_cmd->add_flag("--paper-profile", train.paper_profile,
                      "Start from the full-size hyperparameters instead of the desk profile");
  Optional(train_cmd, "--epochs", train.epochs, "Maximum epochs");
  Optional(train_cmd, "--d-model", train.d_model, "Model width (also sets d_z and d_ff)");
  Optional(train_cmd, "--lambda-r", train.lambda_r, "Rating loss weight");
  Optional(train_cmd, "--lambda-kp", train.lambda_kp, "Keyphrase loss weight");
  Optional(train_cmd, "--lambda-just", train.lambda_just, "Justification loss weight");
  Optional(train_cmd, "--seed", train.seed, "Initialization and shuffling seed");

  critrec::EvalCommand eval;
  eval.corpus_dir = data + "/corpus";
  eval.checkpoint = data + "/model.ckpt";
  eval.out_dir = data + "/eval";
  CLI::App *eval_cmd = app.add_subcommand("eval", "Run an evaluation protocol");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint path")->capture_default_str();
  eval_cmd->add_option("--corpus", eval.corpus_dir, "Corpus directory")->capture_default_str();
  eval_cmd->add_option("--protocol", eval.protocol, "rank | fmap | multistep | loo")->required();
  eval_cmd->add_option("--out", eval.out_dir, "Report directory")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Sampling seed")->capture_default_str();
  eval_cmd->add_option("--topn", eval.cutoffs, "Cutoffs N")->capture_default_str();
  eval_cmd->add_option("--pairs", eval.pairs, "F-MAP user-keyphrase pairs")->capture_default_str();
  eval_cmd->add_option("--steps", eval.steps, "Multi-step critiques per user")
      ->capture_default_str();
  eval_cmd->add_option("--users", eval.users, "Multi-step users")->capture_default_str();
  eval_cmd->add_option("--negatives", eval.negatives, "Leave-one-out negatives")
      ->capture_default_str();
  eval_cmd->add_option("--text-examples", eval.text_examples, "Generated justifications (rank)")
      ->capture_default_str();
  eval_cmd->add_option("--critique-T", eval.critique.threshold, "Critique stopping threshold")
      ->capture_default_str();
  eval_cmd->add_option("--critique-zeta", eval.critique.decay, "Critique step decay")
      ->capture_default_str();
  eval_cmd->add_option("--max-iters", eval.critique.max_iters, "Critique iteration cap")
      ->capture_default_str();

  critrec::ServeCommand serve;
  serve.service.checkpoint = data + "/model.ckpt";
  serve.service.snapshot_dir = data + "/sessions";
  CLI::App *serve_cmd = app.add_subcommand("serve", "Serve the critiquing HTTP API");
  serve_cmd->add_option("--checkpoint", serve.service.checkpoint, "Checkpoint path")
      ->capture_default_str();
  serve_cmd->add_option("--corpus", serve.service.corpus, "Corpus directory (informational)");
  serve_cmd->add_option("--host", serve.service.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.service.port, "Port")->capture_default_str();
  serve_cmd->add_option("--topn", serve.service.top_n, "Default candidates per session")
      ->capture_default_str();
  serve_cmd->add_option("--snapshots", serve.service.snapshot_dir, "Session snapshot directory")
      ->capture_default_str();
  serve_cmd->add_option("--threads", serve.service.threads, "Worker threads")
      ->capture_default_str();
  serve_cmd->add_option("--manifest", serve.manifest_path, "Manifest path");
  serve_cmd->add_option("--critique-T", serve.service.critique.threshold,
                        "Critique stopping threshold")
      ->capture_default_str();
  serve_cmd->add_option("--critique-zeta", serve.service.critique.decay, "Critique step decay")
      ->capture_default_str();
  serve_cmd->add_option("--max-iters", serve.service.critique.max_iters, "Critique iteration cap")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? critrec::kExitOk : critrec::kExitUsage;
  }

  try {
    if (*synth_cmd) {
      synth.argv = args;
      critrec::RunSynth(synth, std::cerr);
    } else if (*train_cmd) {
      train.argv = args;
      critrec::RunTrain(train, std::cerr);
    } else if (*eval_cmd) {
      eval.argv = args;
      critrec::RunEval(eval, std::cout);
    } else if (*serve_cmd) {
      serve.argv = args;
      critrec::RunServe(serve, std::cerr);
    }
  } catch (const critrec::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return critrec::ExitCodeFor(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return critrec::kExitRuntime;
  }
  return critrec::kExitOk;
}
