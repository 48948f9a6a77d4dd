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

#include "critrec/harness/commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "critrec/corpus/corpus_io.h"
#include "critrec/corpus/interactions.h"
#include "critrec/corpus/synthetic.h"
#include "critrec/eval/experiments.h"
#include "critrec/harness/manifest.h"
#include "critrec/model/model_io.h"
#include "critrec/model/trainer.h"

namespace critrec {

namespace fs = std::filesystem;

int ExitCodeFor(const Error &error) {
  const std::string &c = error.code();
  if (c == "usage" || c == "invalid-config" || c == "unknown-protocol") return kExitUsage;
  return kExitRuntime;
}

namespace {

// Runs `body` and records the outcome in exactly one manifest.
void WithManifest(RunManifest manifest, const std::string &path,
                  const std::function<void(RunManifest &)> &body) {
  manifest.started_at = UtcTimestamp();
  try {
    body(manifest);
    manifest.status = "ok";
  } catch (const std::exception &e) {
    manifest.status = "failed";
    manifest.summary["error"] = e.what();
    manifest.finished_at = UtcTimestamp();
    if (fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    WriteManifest(path, manifest);
    throw;
  }
  manifest.finished_at = UtcTimestamp();
  WriteManifest(path, manifest);
}

nlohmann::json ReadConfig(const std::string &path) {
  if (path.empty()) return nlohmann::json::object();
  if (!fs::exists(path)) throw Error("usage", "config not found: " + path);
  try {
    nlohmann::json j = ReadJsonFile(path);
    if (!j.is_object()) throw Error("invalid-config", path + " must hold a JSON object");
    return j;
  } catch (const nlohmann::json::exception &e) {
    throw Error("invalid-config", path + ": " + e.what());
  }
}

void RequireCorpusDir(const std::string &dir) {
  const CorpusPaths p{dir};
  for (const std::string &f : {p.reviews(), p.vocabulary(), p.split(), p.settings()}) {
    if (!fs::exists(f)) throw Error("usage", "corpus file missing: " + f);
  }
}

std::string Fixed(double v, int width = 9, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, precision, v);
  return buf;
}

void WriteRecords(const std::string &path, const std::vector<nlohmann::json> &records) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  for (const nlohmann::json &r : records) out << r.dump() << '\n';
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path);
  out << text;
}

}  // namespace

void RunSynth(const SynthCommand &cmd, std::ostream &log) {
  if (cmd.out_dir.empty()) throw Error("usage", "synth needs an output directory");
  nlohmann::json config = ReadConfig(cmd.config_path);
  SyntheticConfig synth;
  CorpusSettings settings;
  try {
    const bool nested = config.contains("synthetic") || config.contains("corpus");
    synth = (nested ? config.value("synthetic", nlohmann::json::object()) : config)
                .get<SyntheticConfig>();
    if (nested && config.contains("corpus")) settings = CorpusSettings::FromJson(config["corpus"]);
  } catch (const nlohmann::json::exception &e) {
    throw Error("invalid-config", e.what());
  }
  if (cmd.seed) synth.seed = *cmd.seed;
  synth.Validate();
  settings.keyphrases_per_aspect = static_cast<size_t>(synth.keyphrases_per_aspect);

  const CorpusPaths paths{cmd.out_dir};
  RunManifest manifest;
  manifest.command = "synth";
  manifest.argv = cmd.argv;
  manifest.config = {{"synthetic", synth}, {"corpus", settings.ToJson()}};
  manifest.seed = synth.seed;
  if (!cmd.config_path.empty()) manifest.inputs = {cmd.config_path};
  manifest.input_hash = HashInputs(manifest.inputs);
  WithManifest(manifest, cmd.out_dir + "/manifest.json", [&](RunManifest &m) {
    fs::create_directories(cmd.out_dir);
    SyntheticCorpus corpus = GenerateSyntheticCorpus(synth);
    const FilterRules rules = FilterRules::Defaults();
    KeyphraseVocabulary vocab =
        MineKeyphrases(corpus.reviews, settings.keyphrases_per_aspect, rules);
    SplitAssignment split =
        SplitCorpus(corpus.reviews, settings.min_interactions, settings.train_fraction);
    WriteReviews(paths.reviews(), corpus.reviews);
    WriteJsonFile(paths.vocabulary(), vocab);
    WriteSplit(paths.split(), split);
    WriteJsonFile(paths.settings(), settings.ToJson());
    WriteJsonFile(paths.ground_truth(), corpus.GroundTruthJson());
    m.outputs = {paths.reviews(), paths.vocabulary(), paths.split(), paths.settings(),
                 paths.ground_truth()};
    m.summary = {{"reviews", corpus.reviews.size()},
                 {"keyphrases", vocab.size()},
                 {"train", split.Count(Split::kTrain)},
                 {"valid", split.Count(Split::kValid)},
                 {"test", split.Count(Split::kTest)}};
    log << "wrote " << corpus.reviews.size() << " reviews and " << vocab.size()
        << " keyphrases to " << cmd.out_dir << "\n";
  });
}

HyperParams ResolveHyperParams(const TrainCommand &cmd) {
  HyperParams hp = cmd.paper_profile ? HyperParams::Paper() : HyperParams::Desk();
  nlohmann::json config = ReadConfig(cmd.config_path);
  if (!config.empty()) {
    nlohmann::json merged = hp;
    merged.update(config.value("hyperparams", config));
    try {
      hp = merged.get<HyperParams>();
    } catch (const nlohmann::json::exception &e) {
      throw Error("invalid-config", e.what());
    }
  }
  if (cmd.epochs) hp.epochs = *cmd.epochs;
  if (cmd.d_model) {
    hp.d_model = *cmd.d_model;
    hp.d_z = *cmd.d_model;
    hp.d_ff = 4 * *cmd.d_model;
  }
  if (cmd.lambda_r) hp.lambda_r = *cmd.lambda_r;
  if (cmd.lambda_kp) hp.lambda_kp = *cmd.lambda_kp;
  if (cmd.lambda_just) hp.lambda_just = *cmd.lambda_just;
  if (cmd.seed) hp.seed = *cmd.seed;
  hp.Validate();
  return hp;
}

ModelData LoadModelData(const std::string &corpus_dir, const TokenVocab &tokens,
                        const HyperParams &hyper) {
  RequireCorpusDir(corpus_dir);
  CorpusBundle corpus = LoadCorpusDir(corpus_dir);
  PreparedCorpus prepared = PrepareCorpus(corpus.reviews, corpus.split, corpus.vocabulary,
                                          FilterRules::Defaults(),
                                          corpus.settings.rating_threshold);
  return BuildModelData(prepared, tokens, hyper.n_just, hyper.max_just_len, hyper.seed);
}

void RunTrain(const TrainCommand &cmd, std::ostream &log) {
  if (cmd.checkpoint.empty()) throw Error("usage", "train needs an output checkpoint");
  RequireCorpusDir(cmd.corpus_dir);
  const HyperParams hp = ResolveHyperParams(cmd);
  const std::string log_path = cmd.log_path.empty() ? cmd.checkpoint + ".log.jsonl" : cmd.log_path;

  RunManifest manifest;
  manifest.command = "train";
  manifest.argv = cmd.argv;
  manifest.config = {{"hyperparams", hp}, {"corpus", cmd.corpus_dir}};
  manifest.seed = hp.seed;
  manifest.inputs = {cmd.corpus_dir};
  if (!cmd.config_path.empty()) manifest.inputs.push_back(cmd.config_path);
  manifest.input_hash = HashInputs(manifest.inputs);
  WithManifest(manifest, cmd.checkpoint + ".manifest.json", [&](RunManifest &m) {
    if (fs::path parent = fs::path(cmd.checkpoint).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    m.outputs = {log_path};
    CorpusBundle corpus = LoadCorpusDir(cmd.corpus_dir);
    const FilterRules rules = FilterRules::Defaults();
    PreparedCorpus prepared = PrepareCorpus(corpus.reviews, corpus.split, corpus.vocabulary,
                                            rules, corpus.settings.rating_threshold);
    TokenVocab tokens = TokenVocab::Build(prepared.user_pool, corpus.vocabulary);
    ModelData data = BuildModelData(prepared, tokens, hp.n_just, hp.max_just_len, hp.seed);
    log << data.users.size() << " users, " << data.items.size() << " items, "
        << data.examples.size() << " examples, vocabulary " << tokens.size() << "\n";

    std::ofstream loss_log(log_path);
    if (!loss_log) throw Error("io", "cannot write " + log_path);
    loss_log << nlohmann::json{{"format", "critrec-train-log"},
                               {"version", 1},
                               {"lambda",
                                {{"r", hp.lambda_r},
                                 {"kp", hp.lambda_kp},
                                 {"just", hp.lambda_just}}}}
                    .dump()
             << '\n';
    loss_log.flush();

    Network net(hp, static_cast<int64_t>(data.users.size()),
                static_cast<int64_t>(data.items.size()), static_cast<int64_t>(tokens.size()),
                KeyphraseTokenIds(corpus.vocabulary, tokens));
    net.Initialize(hp.seed);
    TrainOptions options;
    options.on_epoch = [&](const EpochRecord &r) {
      loss_log << EpochRecordToJson(r).dump() << '\n';
      loss_log.flush();
      log << "epoch " << r.epoch << " train " << Fixed(r.train.total, 0) << " valid "
          << Fixed(r.valid.total, 0) << " (" << Fixed(r.seconds, 0, 1) << "s)\n";
    };
    TrainResult result = Train(net, data, options);
    const EpochRecord &best = result.history.at(result.best_epoch - 1);
    SaveModel(cmd.checkpoint, MakeBundle(std::move(net), tokens, corpus.vocabulary, data),
              {{"best_epoch", result.best_epoch}});
    m.outputs.push_back(cmd.checkpoint);
    m.summary = {{"epochs", result.history.size()},
                 {"best_epoch", result.best_epoch},
                 {"early_stopped", result.early_stopped},
                 {"steps", result.steps},
                 {"valid", {{"L_r", best.valid.rating},
                            {"L_kp", best.valid.keyphrase},
                            {"L_just", best.valid.justification},
                            {"total", best.valid.total}}}};
    log << "best epoch " << result.best_epoch << ": valid L_r " << Fixed(best.valid.rating, 0)
        << " L_kp " << Fixed(best.valid.keyphrase, 0) << " L_just "
        << Fixed(best.valid.justification, 0) << " total " << Fixed(best.valid.total, 0)
        << "\n";
  });
}

namespace {

struct EvalOutput {
  std::vector<nlohmann::json> records;
  std::string table;
};

EvalOutput EvalRank(const Engine &engine, const ModelData &data, const EvalCommand &cmd) {
  ModelEvalOptions o;
  o.cutoffs = cmd.cutoffs;
  o.max_text_examples = cmd.text_examples;
  o.run_loo = false;
  ModelEvalReport r = EvaluateModel(engine, data, o);
  ConditioningReport cond =
      RunConditioningExperiment(engine, data, Split::kTest, cmd.text_examples);
  EvalOutput out;
  out.records.push_back({{"record", "rating"},
                         {"examples", r.examples},
                         {"mae", r.mae},
                         {"rmse", r.rmse},
                         {"global_mean_mae", r.global_mean_mae}});
  out.table = "keyphrase explanation (" + std::to_string(r.keyphrase_examples) +
              " test examples)\n     N      NDCG       MAP         P         R  Pop-NDCG\n";
  for (size_t c = 0; c < r.cutoffs.size(); ++c) {
    out.records.push_back({{"record", "keyphrase"},
                           {"n", r.cutoffs[c]},
                           {"model", r.keyphrase[c]},
                           {"popularity", r.keyphrase_popularity[c]},
                           {"examples", r.keyphrase_examples}});
    const RankingMetrics &k = r.keyphrase[c];
    out.table += Fixed(static_cast<double>(r.cutoffs[c]), 6, 0) + Fixed(k.ndcg, 10) +
                 Fixed(k.map, 10) + Fixed(k.precision, 10) + Fixed(k.recall, 10) +
                 Fixed(r.keyphrase_popularity[c].ndcg, 10) + "\n";
  }
  out.records.push_back({{"record", "text"},
                         {"examples", r.text_examples},
                         {"overlap", r.text},
                         {"r_kw", r.r_kw}});
  out.records.push_back({{"record", "conditioning"}, {"report", ToJson(cond)}});
  out.table += "rating MAE " + Fixed(r.mae, 0) + " (global mean " + Fixed(r.global_mean_mae, 0) +
               "), RMSE " + Fixed(r.rmse, 0) + "\n";
  out.table += "BLEU-1 " + Fixed(r.text.bleu[0], 0, 2) + " BLEU-4 " + Fixed(r.text.bleu[3], 0, 2) +
               " ROUGE-L " + Fixed(r.text.rouge_l, 0, 2) + " R_KW " + Fixed(r.r_kw, 0) + "\n";
  out.table += "R_KW conditioned " + Fixed(cond.conditioned.mean, 0) + " ablated " +
               Fixed(cond.ablated.mean, 0) + "\n";
  return out;
}

EvalOutput EvalFMap(const Engine &engine, const EvalCommand &cmd) {
  FMapOptions o;
  o.n_pairs = cmd.pairs;
  o.cutoffs = cmd.cutoffs;
  o.seed = cmd.seed;
  o.critique = cmd.critique;
  FMapReport r = RunFMapExperiment(engine, o);
  EvalOutput out;
  out.table = "F-MAP over " + std::to_string(r.pairs) +
              " user-keyphrase removals\n     N      mean    stddev      ci95\n";
  for (size_t c = 0; c < r.cutoffs.size(); ++c) {
    out.records.push_back(
        {{"record", "fmap"}, {"n", r.cutoffs[c]}, {"fmap", r.fmap[c]}, {"pairs", r.pairs}});
    out.table += Fixed(static_cast<double>(r.cutoffs[c]), 6, 0) + Fixed(r.fmap[c].mean, 10) +
                 Fixed(r.fmap[c].stddev, 10) + Fixed(r.fmap[c].ci95, 10) + "\n";
  }
  out.records.push_back(
      {{"record", "convergence"}, {"converged", r.converged}, {"critiqued", r.critiqued}});
  out.table += "converged critiques " + std::to_string(r.converged) + " of " +
               std::to_string(r.critiqued) + "\n";
  return out;
}

EvalOutput EvalMultistep(const Engine &engine, const ModelData &data, const EvalCommand &cmd) {
  MultistepOptions o;
  o.n_users = cmd.users;
  o.max_steps = cmd.steps;
  o.cutoff = cmd.cutoffs.size() > 1 ? 10 : cmd.cutoffs.front();
  o.seed = cmd.seed;
  o.critique = cmd.critique;
  MultistepReport r = RunMultistepExperiment(engine, data, o);
  EvalOutput out;
  out.table = "multi-step critiquing, " + std::to_string(r.users) + " users, N=" +
              std::to_string(o.cutoff) +
              "\n  step      NDCG       MAP         P         R      R_KW  saturated\n";
  nlohmann::json steps = ToJson(r)["steps"];
  for (size_t s = 0; s < r.precision.size(); ++s) {
    nlohmann::json rec = steps[s];
    rec["record"] = "step";
    rec["n"] = o.cutoff;
    out.records.push_back(rec);
    out.table += Fixed(static_cast<double>(s), 6, 0) + Fixed(r.ndcg[s].mean, 10) +
                 Fixed(r.map[s].mean, 10) + Fixed(r.precision[s].mean, 10) +
                 Fixed(r.recall[s].mean, 10) + Fixed(r.r_kw[s].mean, 10) +
                 Fixed(static_cast<double>(r.saturated[s]), 11, 0) + "\n";
  }
  return out;
}

EvalOutput EvalLoo(const Engine &engine, const ModelData &data, const EvalCommand &cmd) {
  LooOptions o;
  o.n_negatives = cmd.negatives;
  o.cutoff = cmd.cutoffs.size() > 1 ? 10 : cmd.cutoffs.front();
  o.seed = cmd.seed;
  std::vector<LooUser> users = BuildLooUsers(data);
  LooReport r = LeaveOneOut(
      users, static_cast<int64_t>(data.items.size()),
      [&](int64_t user, int64_t item) {
        return engine.PredictRating(engine.EncodeIndex(user, item).z);
      },
      o);
  EvalOutput out;
  out.records.push_back({{"record", "loo"},
                         {"n", o.cutoff},
                         {"negatives", o.n_negatives},
                         {"metrics", r.mean},
                         {"users_evaluated", r.users_evaluated},
                         {"users_skipped", r.users_skipped},
                         {"slate_size", r.slate_size}});
  out.table = "leave-one-out @" + std::to_string(o.cutoff) + ": NDCG " + Fixed(r.mean.ndcg, 0) +
              " recall " + Fixed(r.mean.recall, 0) +
              " over " + std::to_string(r.users_evaluated) + " users (" +
              std::to_string(r.users_skipped) + " skipped, slate " +
              std::to_string(r.slate_size) + ")\n";
  return out;
}

}  // namespace

void RunEval(const EvalCommand &cmd, std::ostream &log) {
  static const std::vector<std::string> kProtocols = {"rank", "fmap", "multistep", "loo"};
  if (std::find(kProtocols.begin(), kProtocols.end(), cmd.protocol) == kProtocols.end()) {
    throw Error("unknown-protocol", "'" + cmd.protocol + "' (expected rank|fmap|multistep|loo)");
  }
  if (cmd.out_dir.empty()) throw Error("usage", "eval needs an output directory");
  if (cmd.cutoffs.empty()) throw Error("usage", "at least one cutoff is required");
  for (int64_t n : cmd.cutoffs) {
    if (n < 1) throw Error("usage", "cutoffs must be positive");
  }
  if (!fs::exists(cmd.checkpoint)) throw Error("usage", "checkpoint not found: " + cmd.checkpoint);
  RequireCorpusDir(cmd.corpus_dir);
  cmd.critique.Validate();

  RunManifest manifest;
  manifest.command = "eval";
  manifest.argv = cmd.argv;
  manifest.config = {{"protocol", cmd.protocol}, {"cutoffs", cmd.cutoffs},
                     {"pairs", cmd.pairs},       {"steps", cmd.steps},
                     {"users", cmd.users},       {"negatives", cmd.negatives},
                     {"text_examples", cmd.text_examples},
                     {"critique", cmd.critique}, {"checkpoint", cmd.checkpoint},
                     {"corpus", cmd.corpus_dir}};
  manifest.seed = cmd.seed;
  manifest.inputs = {cmd.checkpoint, cmd.corpus_dir};
  manifest.input_hash = HashInputs(manifest.inputs);
  const std::string stem = cmd.out_dir + "/" + cmd.protocol;
  WithManifest(manifest, stem + ".manifest.json", [&](RunManifest &m) {
    fs::create_directories(cmd.out_dir);
    Engine engine(LoadModel(cmd.checkpoint));
    ModelData data = LoadModelData(cmd.corpus_dir, engine.bundle().tokens, engine.hyper());
    if (data.users.ids() != engine.bundle().users.ids() ||
        data.items.ids() != engine.bundle().items.ids()) {
      throw Error("corpus-mismatch", "checkpoint was not trained on " + cmd.corpus_dir);
    }
    EvalOutput out;
    if (cmd.protocol == "rank") out = EvalRank(engine, data, cmd);
    if (cmd.protocol == "fmap") out = EvalFMap(engine, cmd);
    if (cmd.protocol == "multistep") out = EvalMultistep(engine, data, cmd);
    if (cmd.protocol == "loo") out = EvalLoo(engine, data, cmd);
    WriteRecords(stem + ".report.jsonl", out.records);
    WriteText(stem + ".summary.txt", out.table);
    m.outputs = {stem + ".report.jsonl", stem + ".summary.txt"};
    m.summary = {{"report_hash", GitBlobSha1OfFile(stem + ".report.jsonl")}};
    log << out.table;
  });
}

void RunServe(const ServeCommand &cmd, std::ostream &log) {
  const ServiceConfig &s = cmd.service;
  if (s.top_n < 1) throw Error("usage", "--topn must be at least 1");
  if (!fs::exists(s.checkpoint)) throw Error("usage", "checkpoint not found: " + s.checkpoint);
  if (!s.corpus.empty() && !fs::exists(s.corpus)) {
    throw Error("usage", "corpus not found: " + s.corpus);
  }
  s.critique.Validate();
  RunManifest manifest;
  manifest.command = "serve";
  manifest.argv = cmd.argv;
  manifest.config = {{"checkpoint", s.checkpoint}, {"corpus", s.corpus},
                     {"host", s.host},             {"port", s.port},
                     {"top_n", s.top_n},           {"critique", s.critique},
                     {"snapshot_dir", s.snapshot_dir}};
  manifest.inputs = {s.checkpoint};
  manifest.input_hash = HashInputs(manifest.inputs);
  if (!s.snapshot_dir.empty()) manifest.outputs = {s.snapshot_dir};
  const std::string path =
      cmd.manifest_path.empty()
          ? (fs::path(s.checkpoint).parent_path() / "serve.manifest.json").string()
          : cmd.manifest_path;
  log << "manifest " << path << "\n";
  WithManifest(manifest, path, [&](RunManifest &) { RunService(s); });
}

}  // namespace critrec
