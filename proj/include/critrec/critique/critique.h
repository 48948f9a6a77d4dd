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

#ifndef CRITREC_CRITIQUE_CRITIQUE_H_
#define CRITREC_CRITIQUE_CRITIQUE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "critrec/corpus/keyphrases.h"
#include "critrec/model/engine.h"
#include "critrec/model/mlp_head.h"
#include "json.hpp"

namespace critrec {

struct CritiqueParams {
  double threshold = 0.015;
  double decay = 0.9;
  int64_t max_iters = 50;

  // T = 0.01, decay = 0.975.
  static CritiqueParams Alternative();
  // Throws Error("invalid-config") naming the field.
  void Validate() const;
};

void to_json(nlohmann::json &j, const CritiqueParams &p);
void from_json(const nlohmann::json &j, CritiqueParams &p);

enum class EditAction { kAdd, kRemove };

std::string_view EditActionName(EditAction action);
// Throws Error("invalid-input").
EditAction ParseEditAction(std::string_view name);

struct KeyphraseEdit {
  int64_t keyphrase = 0;
  EditAction action = EditAction::kRemove;
  bool operator==(const KeyphraseEdit &) const = default;
};

// Applies the edits to a copy of `current`. An add on a set bit or a remove
// on a clear bit throws Error("redundant-edit"); an out-of-range index throws
// Error("invalid-edit").
BitVector MakeCritiqueVector(const BitVector &current, const std::vector<KeyphraseEdit> &edits);

// Forces the edited bits without consistency checks.
BitVector ImposeEdits(BitVector bits, const std::vector<KeyphraseEdit> &edits);

struct CritiqueTrace {
  std::vector<double> gaps;        // gap before the first step, then after each
  std::vector<double> step_norms;  // one per iteration
  int64_t iterations = 0;
  bool converged = false;
  // "converged", "max-iters" or "vanished-gradient".
  std::string stop_reason;
};

void to_json(nlohmann::json &j, const CritiqueTrace &t);

// Mean absolute difference between probabilities and target bits.
double CritiqueGap(const std::vector<double> &probs, const BitVector &target);

// Decayed normalized gradient descent on z against the binary target, using
// the keyphrase head's BCE. The head is read-only.
std::pair<LatentState, CritiqueTrace> ApplyCritique(const LatentState &state,
                                                    const BitVector &target,
                                                    const MlpHead &head,
                                                    const CritiqueParams &params);

}  // namespace critrec

#endif  // CRITREC_CRITIQUE_CRITIQUE_H_
