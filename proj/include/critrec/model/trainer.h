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

#ifndef CRITREC_MODEL_TRAINER_H_
#define CRITREC_MODEL_TRAINER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "critrec/model/network.h"
#include "json.hpp"

namespace critrec {

struct LossTotals {
  double rating = 0.0;
  double keyphrase = 0.0;
  double justification = 0.0;
  double total = 0.0;
  int64_t examples = 0;
};

struct EpochRecord {
  int64_t epoch = 0;  // 1-based
  LossTotals train;
  LossTotals valid;
  double lr = 0.0;  // at the last step of the epoch
  int64_t steps = 0;
  double seconds = 0.0;
};

nlohmann::json EpochRecordToJson(const EpochRecord &record);

struct TrainOptions {
  // Invoked after every epoch, before early-stopping decisions.
  std::function<void(const EpochRecord &)> on_epoch;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  int64_t best_epoch = 0;
  bool early_stopped = false;
  int64_t steps = 0;
};

// Mean losses over `examples` in inference mode. Examples without
// justification targets still count toward the rating and keyphrase terms.
LossTotals EvaluateLoss(const Network &net, const ModelData &data,
                        const std::vector<const Example *> &examples, int64_t batch);

// Minibatch Adam with the warm-up schedule. On return the network holds the
// parameters of the epoch with the lowest validation total (training total
// when there is no validation split). Throws Error("diverged").
TrainResult Train(Network &net, const ModelData &data, const TrainOptions &options = {});

}  // namespace critrec

#endif  // CRITREC_MODEL_TRAINER_H_
