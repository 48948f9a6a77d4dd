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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "critrec/corpus/corpus_io.h"
#include "critrec/harness/commands.h"
#include "critrec/harness/manifest.h"
#include "test_util.h"

namespace critrec {
namespace {

namespace fs = std::filesystem;

std::vector<nlohmann::json> ReadLines(const std::string &path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

int RunCli(const std::string &args) {
  const std::string cmd = std::string(CRITREC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Manifest, GitBlobHashes) {
  EXPECT_EQ(GitBlobSha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(GitBlobSha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Manifest, RoundTripAndInputHash) {
  testing::TempDir dir("manifest");
  { std::ofstream(dir / "a.txt") << "alpha"; }
  { std::ofstream(dir / "b.txt") << "beta"; }
  const std::string h1 = HashInputs({dir / "a.txt", dir / "b.txt"});
  EXPECT_EQ(h1, HashInputs({dir / "b.txt", dir / "a.txt"}));
  EXPECT_EQ(h1, HashInputs({dir.path()}));
  { std::ofstream(dir / "b.txt") << "changed"; }
  EXPECT_NE(h1, HashInputs({dir / "a.txt", dir / "b.txt"}));

  RunManifest m;
  m.command = "synth";
  m.seed = 9;
  m.config = {{"x", 1}};
  m.outputs = {"o"};
  m.status = "ok";
  WriteManifest(dir / "m.json", m);
  RunManifest back = ReadManifest(dir / "m.json");
  EXPECT_EQ(back.ToJson(), m.ToJson());
}

class HarnessTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new testing::TempDir("harness");
    WriteJsonFile(*root_ / "synth.json",
                  {{"synthetic", testing::ToyCorpusConfig()}, {"corpus", CorpusSettings{}.ToJson()}});
    WriteJsonFile(*root_ / "hyper.json", testing::ToyHyperParams());
    SynthCommand synth;
    synth.config_path = *root_ / "synth.json";
    synth.out_dir = *root_ / "corpus";
    std::ostringstream log;
    RunSynth(synth, log);
    TrainCommand train;
    train.corpus_dir = synth.out_dir;
    train.checkpoint = *root_ / "model/toy.ckpt";
    train.config_path = *root_ / "hyper.json";
    RunTrain(train, log);
  }
  static void TearDownTestSuite() { delete root_; }
  static std::string Path(const std::string &name) { return *root_ / name; }

 private:
  static inline testing::TempDir *root_ = nullptr;
};

TEST_F(HarnessTest, SynthWritesCorpusAndManifest) {
  const CorpusPaths p{Path("corpus")};
  for (const std::string &f : {p.reviews(), p.vocabulary(), p.split(), p.settings(),
                               p.ground_truth(), p.dir + "/manifest.json"}) {
    EXPECT_TRUE(fs::exists(f)) << f;
  }
  RunManifest m = ReadManifest(p.dir + "/manifest.json");
  EXPECT_EQ(m.command, "synth");
  EXPECT_EQ(m.status, "ok");
  EXPECT_EQ(m.seed, testing::ToyCorpusConfig().seed);
  EXPECT_EQ(m.outputs.size(), 5u);
  EXPECT_FALSE(m.input_hash.empty());
}

TEST_F(HarnessTest, SynthIsDeterministicAndCreatesDirectories) {
  testing::TempDir dir("synth_twice");
  SynthCommand a;
  a.config_path = Path("synth.json");
  a.out_dir = dir / "deep/nested/a";
  SynthCommand b = a;
  b.out_dir = dir / "b";
  std::ostringstream log;
  RunSynth(a, log);
  RunSynth(b, log);
  for (const std::string &f : {"reviews.jsonl", "keyphrases.json", "split.jsonl", "corpus.json",
                               "ground_truth.json"}) {
    EXPECT_EQ(GitBlobSha1OfFile(a.out_dir + "/" + f), GitBlobSha1OfFile(b.out_dir + "/" + f)) << f;
  }
}

TEST(Harness, DefaultSynthHasTwentyFourKeyphrases) {
  testing::TempDir dir("synth_default");
  SynthCommand cmd;
  cmd.out_dir = dir / "corpus";
  std::ostringstream log;
  RunSynth(cmd, log);
  EXPECT_EQ(ReadJsonFile(CorpusPaths{cmd.out_dir}.vocabulary())["entries"].size(), 24u);
}

TEST(Harness, InvalidSynthConfigIsUsageErrorNamingField) {
  testing::TempDir dir("synth_bad");
  WriteJsonFile(dir / "bad.json", {{"synthetic", {{"n_aspects", -2}}}});
  SynthCommand cmd;
  cmd.config_path = dir / "bad.json";
  cmd.out_dir = dir / "out";
  std::ostringstream log;
  try {
    RunSynth(cmd, log);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(ExitCodeFor(e), kExitUsage);
    EXPECT_NE(std::string(e.what()).find("n_aspects"), std::string::npos) << e.what();
  }
}

TEST_F(HarnessTest, TrainLogHasOneRowPerEpochAndLambdaHeader) {
  const std::vector<nlohmann::json> rows = ReadLines(Path("model/toy.ckpt.log.jsonl"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["format"], "critrec-train-log");
  EXPECT_EQ(rows[1]["epoch"], 1);
  for (const char *key : {"L_r", "L_kp", "L_just", "total", "valid_total"}) {
    EXPECT_TRUE(rows[1].contains(key)) << key;
  }
  RunManifest m = ReadManifest(Path("model/toy.ckpt.manifest.json"));
  EXPECT_EQ(m.status, "ok");
  EXPECT_EQ(m.summary["epochs"], 1);
}

TEST_F(HarnessTest, LambdaOverrideIsLogged) {
  testing::TempDir dir("train_lambda");
  TrainCommand cmd;
  cmd.corpus_dir = Path("corpus");
  cmd.checkpoint = dir / "m.ckpt";
  cmd.config_path = Path("hyper.json");
  cmd.lambda_just = 0.0;
  cmd.epochs = 1;
  std::ostringstream log;
  RunTrain(cmd, log);
  const auto rows = ReadLines(dir / "m.ckpt.log.jsonl");
  EXPECT_EQ(rows[0]["lambda"]["just"], 0.0);
  EXPECT_EQ(rows[0]["lambda"]["r"], 1.0);
  EXPECT_EQ(ReadManifest(dir / "m.ckpt.manifest.json").config["hyperparams"]["lambda_just"], 0.0);
}

TEST_F(HarnessTest, OverridesLayerOverProfile) {
  TrainCommand cmd;
  cmd.config_path = Path("hyper.json");
  cmd.d_model = 32;
  cmd.seed = 5;
  HyperParams hp = ResolveHyperParams(cmd);
  EXPECT_EQ(hp.d_model, 32);
  EXPECT_EQ(hp.d_z, 32);
  EXPECT_EQ(hp.n_layers, testing::ToyHyperParams().n_layers);
  EXPECT_EQ(hp.seed, 5u);
  TrainCommand paper;
  paper.paper_profile = true;
  EXPECT_EQ(ResolveHyperParams(paper).d_model, 256);
}

TEST_F(HarnessTest, EvalRankReportsThreeCutoffsDeterministically) {
  testing::TempDir dir("eval_rank");
  EvalCommand cmd;
  cmd.checkpoint = Path("model/toy.ckpt");
  cmd.corpus_dir = Path("corpus");
  cmd.protocol = "rank";
  cmd.text_examples = 20;
  cmd.out_dir = dir / "a";
  std::ostringstream log;
  RunEval(cmd, log);
  const auto records = ReadLines(cmd.out_dir + "/rank.report.jsonl");
  std::vector<int64_t> cutoffs;
  for (const nlohmann::json &r : records) {
    if (r["record"] == "keyphrase") {
      cutoffs.push_back(r["n"]);
      for (const char *m : {"ndcg", "map", "precision", "recall"}) {
        EXPECT_TRUE(r["model"].contains(m));
      }
    }
  }
  EXPECT_EQ(cutoffs, (std::vector<int64_t>{5, 10, 20}));
  EXPECT_TRUE(fs::exists(cmd.out_dir + "/rank.summary.txt"));
  EvalCommand again = cmd;
  again.out_dir = dir / "b";
  RunEval(again, log);
  EXPECT_EQ(GitBlobSha1OfFile(cmd.out_dir + "/rank.report.jsonl"),
            GitBlobSha1OfFile(again.out_dir + "/rank.report.jsonl"));
}

TEST_F(HarnessTest, EvalFMapMultistepAndLoo) {
  testing::TempDir dir("eval_other");
  EvalCommand cmd;
  cmd.checkpoint = Path("model/toy.ckpt");
  cmd.corpus_dir = Path("corpus");
  cmd.out_dir = dir.path();
  cmd.pairs = 10;
  cmd.users = 10;
  cmd.steps = 2;
  cmd.negatives = 5;
  std::ostringstream log;
  for (const char *protocol : {"fmap", "multistep", "loo"}) {
    cmd.protocol = protocol;
    RunEval(cmd, log);
    EXPECT_FALSE(ReadLines(dir / (std::string(protocol) + ".report.jsonl")).empty()) << protocol;
  }
  auto fmap = ReadLines(dir / "fmap.report.jsonl");
  EXPECT_EQ(fmap[0]["record"], "fmap");
  EXPECT_TRUE(fmap[0]["fmap"].contains("stddev"));
  EXPECT_EQ(ReadLines(dir / "multistep.report.jsonl").size(), 3u);
}

TEST_F(HarnessTest, UnknownProtocolIsUsageError) {
  EvalCommand cmd;
  cmd.checkpoint = Path("model/toy.ckpt");
  cmd.corpus_dir = Path("corpus");
  cmd.protocol = "bogus";
  cmd.out_dir = Path("never");
  std::ostringstream log;
  try {
    RunEval(cmd, log);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(ExitCodeFor(e), kExitUsage);
  }
}

TEST_F(HarnessTest, CliExitCodes) {
  EXPECT_EQ(RunCli("--help"), 0);
  EXPECT_EQ(RunCli("frobnicate"), 1);
  EXPECT_EQ(RunCli("eval --protocol bogus --checkpoint " + Path("model/toy.ckpt") + " --corpus " +
                   Path("corpus") + " --out " + Path("cli_eval")),
            1);
  EXPECT_EQ(RunCli("train --corpus " + Path("no_such_corpus") + " --out " + Path("x.ckpt")), 1);
  // A corrupt checkpoint is a runtime failure, recorded in the manifest.
  { std::ofstream(Path("broken.ckpt")) << "garbage"; }
  EXPECT_EQ(RunCli("eval --protocol rank --checkpoint " + Path("broken.ckpt") + " --corpus " +
                   Path("corpus") + " --out " + Path("cli_broken")),
            2);
  RunManifest m = ReadManifest(Path("cli_broken/rank.manifest.json"));
  EXPECT_EQ(m.status, "failed");
  EXPECT_TRUE(m.summary.contains("error"));
}

TEST_F(HarnessTest, CliDataDirectoryFromEnvironment) {
  testing::TempDir dir("env");
  const std::string cmd = "CRITREC_DATA_DIR=" + dir.path() + " " + CRITREC_CLI +
                          " synth --config " + Path("synth.json") + " >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "corpus/reviews.jsonl"));
}

}  // namespace
}  // namespace critrec
