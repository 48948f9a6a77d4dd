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

#include "critrec/model/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "critrec/common/error.h"
#include "critrec/numerics/adam.h"
#include "critrec/numerics/functions.h"

namespace critrec {

namespace {

nlohmann::json TotalsToJson(const LossTotals &t) {
  return {{"L_r", t.rating}, {"L_kp", t.keyphrase}, {"L_just", t.justification},
          {"total", t.total}, {"examples", t.examples}};
}

void Accumulate(LossTotals &acc, const LossBreakdown &loss, int64_t n) {
  acc.rating += loss.rating * n;
  acc.keyphrase += loss.keyphrase * n;
  acc.justification += loss.justification * n;
  acc.total += loss.total_value * n;
  acc.examples += n;
}

void Finish(LossTotals &acc) {
  if (acc.examples == 0) return;
  const double n = static_cast<double>(acc.examples);
  acc.rating /= n;
  acc.keyphrase /= n;
  acc.justification /= n;
  acc.total /= n;
}

}  // namespace

nlohmann::json EpochRecordToJson(const EpochRecord &record) {
  return {{"epoch", record.epoch},
          {"L_r", record.train.rating},
          {"L_kp", record.train.keyphrase},
          {"L_just", record.train.justification},
          {"total", record.train.total},
          {"valid_total", record.valid.total},
          {"valid", TotalsToJson(record.valid)},
          {"lr", record.lr},
          {"steps", record.steps},
          {"seconds", record.seconds}};
}

LossTotals EvaluateLoss(const Network &net, const ModelData &data,
                        const std::vector<const Example *> &examples, int64_t batch) {
  LossTotals acc;
  for (size_t start = 0; start < examples.size(); start += batch) {
    const size_t end = std::min(examples.size(), start + static_cast<size_t>(batch));
    std::vector<const Example *> chunk(examples.begin() + start, examples.begin() + end);
    Tape tape;
    ForwardPass fp(net, tape, false, nullptr);
    Accumulate(acc, net.JointLoss(fp, data, chunk), static_cast<int64_t>(chunk.size()));
  }
  Finish(acc);
  return acc;
}

TrainResult Train(Network &net, const ModelData &data, const TrainOptions &options) {
  const HyperParams &hp = net.hyper();
  std::vector<const Example *> train = data.Select(Split::kTrain);
  std::vector<const Example *> valid = data.Select(Split::kValid);
  if (train.empty()) throw Error("empty-corpus", "no training examples");

  AdamState adam;
  adam.beta1 = hp.adam_beta1;
  adam.beta2 = hp.adam_beta2;
  adam.epsilon = hp.adam_epsilon;
  const double scale = NoamScaleForPeak(hp.lr, hp.warmup, hp.d_model);

  TrainResult result;
  ParamStore best = net.params();
  double best_score = std::numeric_limits<double>::infinity();
  int64_t since_best = 0;
  Rng order_rng(MixSeed(hp.seed, "order"));

  for (int64_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    order_rng.Shuffle(train);
    EpochRecord rec;
    rec.epoch = epoch;
    for (size_t start = 0; start < train.size(); start += hp.batch) {
      const size_t end = std::min(train.size(), start + static_cast<size_t>(hp.batch));
      std::vector<const Example *> chunk(train.begin() + start, train.begin() + end);
      Rng dropout_rng(MixSeed(hp.seed, "dropout:" + std::to_string(result.steps)));
      Tape tape;
      ForwardPass fp(net, tape, true, &dropout_rng);
      LossBreakdown loss = net.JointLoss(fp, data, chunk);
      if (!std::isfinite(loss.total_value)) {
        throw Error("diverged", "non-finite loss in epoch " + std::to_string(epoch) +
                                    "; last finite epoch " + std::to_string(epoch - 1));
      }
      tape.Backward(loss.total);
      ++result.steps;
      rec.lr = NoamLr(result.steps, hp.warmup, hp.d_model, scale);
      AdamStep(net.params(), tape.ParamGrads(), adam, rec.lr);
      Accumulate(rec.train, loss, static_cast<int64_t>(chunk.size()));
    }
    Finish(rec.train);
    if (!valid.empty()) rec.valid = EvaluateLoss(net, data, valid, hp.batch);
    rec.steps = result.steps;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);

    const double score = valid.empty() ? rec.train.total : rec.valid.total;
    if (!std::isfinite(score)) {
      throw Error("diverged", "non-finite validation loss in epoch " + std::to_string(epoch) +
                                  "; last finite epoch " + std::to_string(epoch - 1));
    }
    if (score < best_score) {
      best_score = score;
      best = net.params();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= hp.patience && hp.patience > 0) {
      result.early_stopped = true;
      break;
    }
  }
  net.params() = best;
  return result;
}

}  // namespace critrec
