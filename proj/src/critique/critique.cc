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

#include "critrec/critique/critique.h"

#include <cmath>

#include "critrec/common/error.h"

namespace critrec {

CritiqueParams CritiqueParams::Alternative() { return CritiqueParams{0.01, 0.975, 50}; }

void CritiqueParams::Validate() const {
  if (!(threshold > 0.0)) throw Error("invalid-config", "critique threshold must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw Error("invalid-config", "critique decay must lie in (0, 1]");
  }
  if (max_iters < 1) throw Error("invalid-config", "critique max_iters must be at least 1");
}

void to_json(nlohmann::json &j, const CritiqueParams &p) {
  j = nlohmann::json{{"threshold", p.threshold}, {"decay", p.decay}, {"max_iters", p.max_iters}};
}

void from_json(const nlohmann::json &j, CritiqueParams &p) {
  if (j.contains("threshold")) j.at("threshold").get_to(p.threshold);
  if (j.contains("decay")) j.at("decay").get_to(p.decay);
  if (j.contains("max_iters")) j.at("max_iters").get_to(p.max_iters);
}

std::string_view EditActionName(EditAction action) {
  return action == EditAction::kAdd ? "add" : "remove";
}

EditAction ParseEditAction(std::string_view name) {
  if (name == "add") return EditAction::kAdd;
  if (name == "remove") return EditAction::kRemove;
  throw Error("invalid-input", "unknown edit action " + std::string(name));
}

BitVector MakeCritiqueVector(const BitVector &current, const std::vector<KeyphraseEdit> &edits) {
  BitVector out = current;
  for (const KeyphraseEdit &e : edits) {
    if (e.keyphrase < 0 || e.keyphrase >= static_cast<int64_t>(out.size())) {
      throw Error("invalid-edit", "keyphrase index " + std::to_string(e.keyphrase) +
                                      " outside [0, " + std::to_string(out.size()) + ")");
    }
    const bool set = out[e.keyphrase] != 0;
    if ((e.action == EditAction::kAdd) == set) {
      throw Error("redundant-edit", std::string(EditActionName(e.action)) + " of keyphrase " +
                                        std::to_string(e.keyphrase) + " that is already " +
                                        (set ? "present" : "absent"));
    }
    out[e.keyphrase] = e.action == EditAction::kAdd ? 1 : 0;
  }
  return out;
}

BitVector ImposeEdits(BitVector bits, const std::vector<KeyphraseEdit> &edits) {
  for (const KeyphraseEdit &e : edits) bits.at(e.keyphrase) = e.action == EditAction::kAdd ? 1 : 0;
  return bits;
}

void to_json(nlohmann::json &j, const CritiqueTrace &t) {
  j = nlohmann::json{{"gaps", t.gaps},
                     {"step_norms", t.step_norms},
                     {"iterations", t.iterations},
                     {"converged", t.converged},
                     {"stop_reason", t.stop_reason}};
}

double CritiqueGap(const std::vector<double> &probs, const BitVector &target) {
  if (probs.size() != target.size() || probs.empty()) {
    throw Error("shape", "critique target of length " + std::to_string(target.size()) +
                             " vs " + std::to_string(probs.size()) + " probabilities");
  }
  double sum = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) sum += std::abs(probs[k] - target[k]);
  return sum / static_cast<double>(probs.size());
}

std::pair<LatentState, CritiqueTrace> ApplyCritique(const LatentState &state,
                                                    const BitVector &target,
                                                    const MlpHead &head,
                                                    const CritiqueParams &params) {
  params.Validate();
  std::vector<double> t(target.begin(), target.end());
  LatentState out = state;
  CritiqueTrace trace;
  std::vector<double> grad, probs;
  head.Bce(out.z, t, &grad, &probs);
  double gap = CritiqueGap(probs, target);
  trace.gaps.push_back(gap);
  double scale = 1.0;
  while (gap > params.threshold && trace.iterations < params.max_iters) {
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      trace.stop_reason = "vanished-gradient";
      return {out, trace};
    }
    double step_sq = 0.0;
    for (size_t c = 0; c < out.z.size(); ++c) {
      const double step = scale * grad[c] / norm;
      out.z[c] -= step;
      step_sq += step * step;
    }
    trace.step_norms.push_back(std::sqrt(step_sq));
    ++trace.iterations;
    out.edited = true;
    scale *= params.decay;
    head.Bce(out.z, t, &grad, &probs);
    gap = CritiqueGap(probs, target);
    trace.gaps.push_back(gap);
  }
  trace.converged = gap <= params.threshold;
  trace.stop_reason = trace.converged ? "converged" : "max-iters";
  return {out, trace};
}

}  // namespace critrec
