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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Artifacts stay in the work directory
// (first argument, default ./acceptance_work).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance_gradients.h"
#include "critrec/common/error.h"
#include "critrec/common/rng.h"
#include "critrec/corpus/corpus_io.h"
#include "critrec/critique/critique.h"
#include "critrec/eval/preference.h"
#include "critrec/eval/ranking_metrics.h"
#include "critrec/eval/text_metrics.h"
#include "critrec/harness/commands.h"
#include "critrec/harness/manifest.h"
#include "critrec/model/model_io.h"

namespace fs = std::filesystem;
using critrec::Error;

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int g_failures = 0;

void Report(const std::string &name, bool pass, const std::string &detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Runs a criterion body; an exception counts as a failure.
void Criterion(const std::string &name, const std::function<void()> &body) {
  try {
    body();
  } catch (const std::exception &e) {
    Report(name, false, std::string("threw: ") + e.what());
  }
}

std::string Fmt(const char *format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

std::vector<nlohmann::json> ReadLines(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot read " + path);
  std::vector<nlohmann::json> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

nlohmann::json FindRecord(const std::vector<nlohmann::json> &records, const std::string &kind,
                          int64_t n = -1) {
  for (const nlohmann::json &r : records) {
    if (r["record"] == kind && (n < 0 || r.value("n", int64_t{-1}) == n)) return r;
  }
  throw Error("missing", "no " + kind + " record");
}

// Loss rows without wall-clock fields.
std::vector<nlohmann::json> LossHistory(const std::string &log_path) {
  std::vector<nlohmann::json> rows = ReadLines(log_path);
  for (nlohmann::json &r : rows) r.erase("seconds");
  return rows;
}

const std::vector<std::string> kCorpusFiles = {"reviews.jsonl", "keyphrases.json", "split.jsonl",
                                               "corpus.json", "ground_truth.json"};

// Positional definitions for the exhaustive comparison.
critrec::RankingMetrics BruteForce(const std::vector<int64_t> &ranked,
                                   const std::set<int64_t> &rel, int64_t n) {
  double dcg = 0, idcg = 0, ap = 0;
  int64_t hits = 0;
  const int64_t depth = std::min<int64_t>(n, static_cast<int64_t>(ranked.size()));
  for (int64_t pos = 0; pos < depth; ++pos) {
    if (rel.count(ranked[pos])) {
      ++hits;
      dcg += 1.0 / std::log2(pos + 2.0);
      ap += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  const int64_t ideal = std::min<int64_t>(n, static_cast<int64_t>(rel.size()));
  for (int64_t pos = 0; pos < ideal; ++pos) idcg += 1.0 / std::log2(pos + 2.0);
  return {dcg / idcg, ap / static_cast<double>(ideal),
          static_cast<double>(hits) / static_cast<double>(n),
          static_cast<double>(hits) / static_cast<double>(rel.size())};
}

std::string MetricOracles() {
  using namespace critrec;
  int64_t instances = 0;
  for (int64_t size = 1; size <= 6; ++size) {
    std::vector<int64_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int64_t mask = 1; mask < (1 << size); ++mask) {
        std::set<int64_t> rel;
        for (int64_t b = 0; b < size; ++b) {
          if (mask & (1 << b)) rel.insert(b);
        }
        for (int64_t n = 1; n <= size + 1; ++n) {
          const RankingMetrics got = ComputeRankingMetrics(perm, rel, n);
          const RankingMetrics want = BruteForce(perm, rel, n);
          if (got.ndcg != want.ndcg || got.map != want.map || got.precision != want.precision ||
              got.recall != want.recall) {
            return "ranking metrics differ at size " + std::to_string(size);
          }
          ++instances;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PreferencePair> pairs;
    for (int p = 0; p < 30; ++p) {
      pairs.push_back({double(1 + rng.Index(5)), double(1 + rng.Index(5)), rng.Uniform(),
                       double(rng.Index(4)) / 4.0});
    }
    const double delta = double(rng.Index(3));
    double c = 0, d = 0;
    int total = 0;
    for (const PreferencePair &p : pairs) {
      if (p.rating_i == p.rating_j || std::abs(p.rating_i - p.rating_j) < delta) continue;
      ++total;
      if (p.score_i == p.score_j) {
        d += 0.5;
      } else if ((p.score_i > p.score_j) == (p.rating_i > p.rating_j)) {
        c += 1;
      } else {
        d += 1;
      }
    }
    if (total > 0 && KendallTauDelta(pairs, delta) != (c - d) / total) {
      return "Kendall differs on trial " + std::to_string(trial);
    }
  }

  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  const TextOverlap t = ComputeTextOverlap({"the", "cat", "sat"}, {{"the", "cat", "ran"}});
  if (!near(t.bleu[0], 200.0 / 3.0) || !near(t.bleu[1], 100.0 * std::sqrt(1.0 / 3.0)) ||
      !near(t.rouge_l, 200.0 / 3.0)) {
    return "hand-counted BLEU/ROUGE-L example differs";
  }
  const TextOverlap clipped = ComputeTextOverlap({"the", "the", "the"}, {{"the", "cat"}});
  const TextOverlap brief = ComputeTextOverlap({"the", "cat"}, {{"the", "cat", "sat", "down"}});
  if (!near(clipped.bleu[0], 100.0 / 3.0) || !near(brief.bleu[0], 100.0 * std::exp(-1.0))) {
    return "clipping or brevity example differs";
  }
  const double bws = BwsScore({75, 1, 100});
  if (std::abs(bws - 0.74) > 1e-12) return "BWS gave " + std::to_string(bws);
  return "ok: " + std::to_string(instances) + " ranked lists, Kendall, BLEU/ROUGE-L, BWS 0.74";
}

struct StepScheduleStats {
  int64_t traces = 0, converged = 0, zero_iteration = 0;
  double worst_norm = 0.0, worst_converged_gap = -1.0;
  bool ok = true;
  std::string problem;
};

void CheckTrace(const critrec::CritiqueTrace &trace, const critrec::CritiqueParams &params,
                StepScheduleStats &s) {
  ++s.traces;
  if (static_cast<int64_t>(trace.step_norms.size()) != trace.iterations) {
    s.ok = false;
    s.problem = "norm count differs from iterations";
  }
  for (size_t k = 0; k < trace.step_norms.size(); ++k) {
    const double err = std::abs(trace.step_norms[k] - std::pow(params.decay, double(k)));
    s.worst_norm = std::max(s.worst_norm, err);
  }
  if (trace.converged) {
    ++s.converged;
    s.worst_converged_gap = std::max(s.worst_converged_gap, trace.gaps.back() - params.threshold);
  }
}

std::string StepSchedule(const critrec::Engine &engine, StepScheduleStats &s) {
  using namespace critrec;
  const int64_t k = engine.num_keyphrases();
  const int64_t m = engine.hyper().display_keyphrases;
  CritiqueParams loose;
  loose.threshold = 0.2;
  const std::vector<CritiqueParams> settings = {CritiqueParams{}, CritiqueParams::Alternative(),
                                                loose};
  Rng rng(23);
  const int64_t n_users = engine.bundle().users.size();
  const int64_t n_items = engine.bundle().items.size();
  for (int sample = 0; sample < 150; ++sample) {
    LatentState state = engine.EncodeIndex(static_cast<int64_t>(rng.Index(n_users)),
                                           static_cast<int64_t>(rng.Index(n_items)));
    const auto [probs, shown] = engine.ExplainKeyphrases(state.z, m);
    const int64_t kp = static_cast<int64_t>(rng.Index(static_cast<uint64_t>(k)));
    const EditAction action = shown[kp] ? EditAction::kRemove : EditAction::kAdd;
    const BitVector target = MakeCritiqueVector(shown, {{kp, action}});
    for (const CritiqueParams &p : settings) {
      CheckTrace(ApplyCritique(state, target, engine.keyphrase_head(), p).second, p, s);
    }
    // Threshold at or above the starting gap: nothing may move.
    CritiqueParams idle;
    idle.threshold = std::min(1.0, CritiqueGap(probs, target) + 1e-12);
    const auto [after, trace] = ApplyCritique(state, target, engine.keyphrase_head(), idle);
    CheckTrace(trace, idle, s);
    if (trace.iterations != 0 || after.z != state.z || !trace.converged) {
      s.ok = false;
      s.problem = "initial gap within T still moved z";
    } else {
      ++s.zero_iteration;
    }
  }
  if (s.worst_norm > 1e-6) {
    s.ok = false;
    s.problem = "step norm off by " + std::to_string(s.worst_norm);
  }
  if (s.worst_converged_gap > 0.0) {
    s.ok = false;
    s.problem = "converged trace above T";
  }
  return Fmt("%.0f traces, %.0f converged, %.0f zero-iteration, worst |norm - zeta^k| %.1e",
             double(s.traces), double(s.converged), double(s.zero_iteration), s.worst_norm);
}

}  // namespace

int main(int argc, char **argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_work");
  fs::remove_all(work);
  fs::create_directories(work);
  std::ostringstream quiet;

  Criterion("gradient-correctness", [&] {
    const acceptance::GradientCheckSummary g = acceptance::RunGradientChecks(24, 101);
    const bool pass = g.configs >= 20 && g.max_error_z <= 1e-4 && g.max_error_weights <= 1e-4 &&
                      g.seconds < 60.0;
    Report("gradient-correctness", pass,
           Fmt("%.0f configs, max rel err z %.2e, weights %.2e, %.1fs", double(g.configs),
               g.max_error_z, g.max_error_weights, g.seconds) +
               " (" + std::to_string(g.checked_z + g.checked_weights) + " entries, " +
               std::to_string(g.below_floor) + " under the 1e-5 magnitude floor)");
  });

  Criterion("metric-oracles", [&] {
    const std::string result = MetricOracles();
    Report("metric-oracles", result.rfind("ok", 0) == 0, result);
  });

  // Default synthetic corpus, desk training profile.
  critrec::SynthCommand synth;
  synth.out_dir = work / "corpus";
  critrec::TrainCommand train;
  train.corpus_dir = synth.out_dir;
  train.checkpoint = work / "model/desk.ckpt";
  critrec::EvalCommand rank;
  rank.checkpoint = train.checkpoint;
  rank.corpus_dir = synth.out_dir;
  rank.protocol = "rank";
  rank.out_dir = work / "eval";
  std::vector<nlohmann::json> rank_records;
  bool trained = false;

  Criterion("training-sanity", [&] {
    const auto start = Clock::now();
    critrec::RunSynth(synth, quiet);
    critrec::RunTrain(train, quiet);
    const double train_seconds = SecondsSince(start);
    trained = true;
    const std::vector<nlohmann::json> rows = LossHistory(train.checkpoint + ".log.jsonl");
    if (rows.size() < 6) throw Error("short-run", "fewer than 5 epochs logged");
    const double e1 = rows[1]["total"], e5 = rows[5]["total"];
    critrec::RunEval(rank, quiet);
    rank_records = ReadLines(rank.out_dir + "/rank.report.jsonl");
    const nlohmann::json rating = FindRecord(rank_records, "rating");
    const double mae = rating["mae"], base = rating["global_mean_mae"];
    Report("training-sanity", e5 < e1 && mae <= 0.9 * base && train_seconds < 900.0,
           Fmt("train loss epoch1 %.4f epoch5 %.4f; MAE %.4f vs global mean %.4f", e1, e5, mae,
               base) +
               Fmt(" (%.1f%% better); train %.0fs", 100.0 * (1.0 - mae / base), train_seconds));
  });

  Criterion("keyphrase-beats-popularity", [&] {
    const nlohmann::json r = FindRecord(rank_records, "keyphrase", 10);
    const double model = r["model"]["ndcg"], pop = r["popularity"]["ndcg"];
    Report("keyphrase-beats-popularity", model > pop,
           Fmt("NDCG@10 %.4f vs popularity %.4f", model, pop));
  });

  std::shared_ptr<const critrec::Engine> engine;
  if (trained) {
    engine = std::make_shared<const critrec::Engine>(critrec::LoadModel(train.checkpoint));
  }

  Criterion("critique-step-schedule", [&] {
    if (!engine) throw Error("no-model", "training did not complete");
    StepScheduleStats stats;
    const std::string detail = StepSchedule(*engine, stats);
    Report("critique-step-schedule", stats.ok,
           stats.ok ? detail : detail + "; " + stats.problem);
  });

  Criterion("single-step-fmap", [&] {
    if (!trained) throw Error("no-model", "training did not complete");
    critrec::EvalCommand fmap = rank;
    fmap.protocol = "fmap";
    fmap.pairs = 500;
    const auto start = Clock::now();
    critrec::RunEval(fmap, quiet);
    const double seconds = SecondsSince(start);
    const auto records = ReadLines(fmap.out_dir + "/fmap.report.jsonl");
    const nlohmann::json r = FindRecord(records, "fmap", 10);
    const double mean = r["fmap"]["mean"], ci = r["fmap"]["ci95"];
    const int64_t pairs = r["pairs"];
    Report("single-step-fmap", mean > 0.0 && pairs >= 500 && seconds < 600.0,
           Fmt("F-MAP@10 %.4f +/- %.4f over %.0f pairs, %.0fs", mean, ci, double(pairs),
               seconds));
  });

  Criterion("multistep-tracking", [&] {
    if (!trained) throw Error("no-model", "training did not complete");
    critrec::EvalCommand ms = rank;
    ms.protocol = "multistep";
    ms.users = 200;
    ms.steps = 5;
    critrec::RunEval(ms, quiet);
    std::vector<double> p, rkw;
    int64_t users = 0;
    for (const nlohmann::json &r : ReadLines(ms.out_dir + "/multistep.report.jsonl")) {
      p.push_back(r["precision"]["mean"]);
      rkw.push_back(r["r_kw"]["mean"]);
      users = r["precision"]["n"];
    }
    bool monotone = p.size() == 6;
    for (size_t s = 1; s < p.size(); ++s) monotone = monotone && p[s] >= p[s - 1];
    std::string detail = "P@10";
    for (double v : p) detail += Fmt(" %.4f", v);
    detail += "; R_KW";
    for (double v : rkw) detail += Fmt(" %.3f", v);
    detail += "; users " + std::to_string(users);
    Report("multistep-tracking", monotone && p.back() > p.front() && users >= 200, detail);
  });

  Criterion("conditioning-consistency", [&] {
    const nlohmann::json r = FindRecord(rank_records, "conditioning")["report"];
    const double with = r["conditioned"]["mean"], without = r["ablated"]["mean"];
    Report("conditioning-consistency", with > without,
           Fmt("R_KW conditioned %.4f vs ablated %.4f over %.0f pairs", with, without,
               double(r["examples"])));
  });

  Criterion("determinism-persistence", [&] {
    if (!trained) throw Error("no-model", "training did not complete");
    std::vector<std::string> broken;
    // Corpus bytes.
    critrec::SynthCommand again = synth;
    again.out_dir = work / "corpus_again";
    critrec::RunSynth(again, quiet);
    for (const std::string &f : kCorpusFiles) {
      if (critrec::GitBlobSha1OfFile(synth.out_dir + "/" + f) !=
          critrec::GitBlobSha1OfFile(again.out_dir + "/" + f)) {
        broken.push_back("corpus " + f);
      }
    }
    // Loss history of a short rerun against the first epochs of another.
    critrec::TrainCommand a = train, b = train;
    a.epochs = b.epochs = 2;
    a.checkpoint = work / "rerun/a.ckpt";
    b.checkpoint = work / "rerun/b.ckpt";
    critrec::RunTrain(a, quiet);
    critrec::RunTrain(b, quiet);
    if (LossHistory(a.checkpoint + ".log.jsonl") != LossHistory(b.checkpoint + ".log.jsonl")) {
      broken.push_back("loss history");
    }
    if (critrec::GitBlobSha1OfFile(a.checkpoint) != critrec::GitBlobSha1OfFile(b.checkpoint)) {
      broken.push_back("checkpoint bytes");
    }
    // Evaluation report.
    critrec::EvalCommand rerun = rank;
    rerun.out_dir = work / "eval_again";
    critrec::RunEval(rerun, quiet);
    if (critrec::GitBlobSha1OfFile(rank.out_dir + "/rank.report.jsonl") !=
        critrec::GitBlobSha1OfFile(rerun.out_dir + "/rank.report.jsonl")) {
      broken.push_back("rank report");
    }
    // Save and reload: every prediction bit-identical.
    const std::string copy = work / "model/roundtrip.ckpt";
    critrec::SaveModel(copy, engine->bundle());
    const critrec::Engine reloaded(critrec::LoadModel(copy));
    int64_t compared = 0;
    for (int64_t u = 0; u < engine->bundle().users.size(); u += 7) {
      for (int64_t i = 0; i < engine->bundle().items.size(); ++i) {
        const auto za = engine->EncodeIndex(u, i).z, zb = reloaded.EncodeIndex(u, i).z;
        if (za != zb || engine->PredictRating(za) != reloaded.PredictRating(zb) ||
            engine->KeyphraseProbs(za) != reloaded.KeyphraseProbs(zb)) {
          broken.push_back("round trip at user " + std::to_string(u));
          u = engine->bundle().users.size();
          break;
        }
        ++compared;
      }
    }
    std::string detail = broken.empty() ? "corpus, loss history, checkpoint, rank report and " +
                                              std::to_string(compared) +
                                              " reloaded predictions identical"
                                        : "differs:";
    for (const std::string &b : broken) detail += " " + b + ";";
    Report("determinism-persistence", broken.empty(), detail);
  });

  std::printf("%s\n", g_failures == 0 ? "all criteria passed"
                                      : (std::to_string(g_failures) + " criteria failed").c_str());
  return g_failures == 0 ? 0 : 1;
}
