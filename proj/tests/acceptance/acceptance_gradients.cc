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

// Gradient checks for the acceptance run. Compiled against the float64 build,
// so everything under namespace critrec here lands in critrec_f64.

#include "acceptance_gradients.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <string>
#include <vector>

#include "critrec/common/rng.h"
#include "critrec/model/network.h"
#include "critrec/numerics/tape.h"

static_assert(sizeof(critrec::Real) == sizeof(double), "needs the float64 build");

namespace {

using namespace critrec;

struct RandomToy {
  Network net;
  ModelData data;
  std::vector<const Example *> batch;
};

TokenSeq RandomSeq(Rng &rng, int64_t vocab, int64_t max_len) {
  TokenSeq s(1 + rng.Index(static_cast<uint64_t>(max_len)));
  for (int64_t &t : s) t = 4 + static_cast<int64_t>(rng.Index(static_cast<uint64_t>(vocab - 4)));
  return s;
}

RandomToy MakeRandomToy(uint64_t seed) {
  Rng rng(seed);
  HyperParams hp = HyperParams::Desk();
  hp.n_heads = 1 + static_cast<int64_t>(rng.Index(2));
  hp.d_model = hp.n_heads * (2 + static_cast<int64_t>(rng.Index(4)));
  hp.d_z = hp.d_model;
  hp.d_ff = 4 + static_cast<int64_t>(rng.Index(9));
  hp.n_layers = 1 + static_cast<int64_t>(rng.Index(2));
  hp.head_dims = {3 + static_cast<int64_t>(rng.Index(5)), 2 + static_cast<int64_t>(rng.Index(4))};
  hp.n_just = 1 + static_cast<int64_t>(rng.Index(3));
  hp.max_just_len = 4;
  hp.dropout = 0.0;
  hp.lambda_kp = rng.Uniform(0.5, 10.0);
  const int64_t n_users = 2 + static_cast<int64_t>(rng.Index(3));
  const int64_t n_items = 2 + static_cast<int64_t>(rng.Index(3));
  const int64_t n_kp = 2 + static_cast<int64_t>(rng.Index(4));
  const int64_t vocab = 4 + n_kp + 4 + static_cast<int64_t>(rng.Index(6));
  std::vector<int64_t> kp_tokens;
  for (int64_t k = 0; k < n_kp; ++k) kp_tokens.push_back(4 + k);

  RandomToy t;
  t.net = Network(hp, n_users, n_items, vocab, kp_tokens);
  t.net.Initialize(seed);
  for (const std::string &name : t.net.params().names()) {
    Tensor &p = t.net.params().Get(name);
    for (int64_t i = 0; i < p.size(); ++i) p[i] += 0.1 * rng.Normal();
  }
  std::vector<std::string> names;
  for (int64_t u = 0; u < n_users; ++u) names.push_back("u" + std::to_string(u));
  t.data.users = EntityTable(names);
  names.clear();
  for (int64_t i = 0; i < n_items; ++i) names.push_back("i" + std::to_string(i));
  t.data.items = EntityTable(names);
  auto history = [&]() {
    std::vector<TokenSeq> h(static_cast<size_t>(hp.n_just));
    for (TokenSeq &s : h) s = RandomSeq(rng, vocab, hp.max_just_len);
    return h;
  };
  for (int64_t u = 0; u < n_users; ++u) t.data.user_histories.push_back(history());
  for (int64_t i = 0; i < n_items; ++i) t.data.item_histories.push_back(history());
  const int64_t n_examples = 2 + static_cast<int64_t>(rng.Index(4));
  for (int64_t e = 0; e < n_examples; ++e) {
    Example ex;
    ex.user = static_cast<int64_t>(rng.Index(static_cast<uint64_t>(n_users)));
    ex.item = static_cast<int64_t>(rng.Index(static_cast<uint64_t>(n_items)));
    ex.label = rng.Bernoulli(0.5) ? 1.0f : 0.0f;
    ex.keyphrases.resize(static_cast<size_t>(n_kp));
    for (auto &b : ex.keyphrases) b = rng.Bernoulli(0.4) ? 1 : 0;
    ex.targets.push_back(RandomSeq(rng, vocab, hp.max_just_len));
    if (rng.Bernoulli(0.5)) ex.targets.push_back(RandomSeq(rng, vocab, hp.max_just_len));
    t.data.examples.push_back(ex);
  }
  for (const Example &e : t.data.examples) t.batch.push_back(&e);
  return t;
}

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

// Central difference of f around x with step h.
template <typename F>
double CentralDifference(double &x, double h, const F &f) {
  const double old = x;
  x = old + h;
  const double plus = f();
  x = old - h;
  const double minus = f();
  x = old;
  return (plus - minus) / (2 * h);
}

// Round-off in the differenced losses is about 1e-10 at h = 1e-5, so
// gradients below the floor are compared in absolute terms.
constexpr double kFloor = 1e-5;

double RelativeError(double numeric, double analytic) {
  return std::abs(numeric - analytic) / std::max(kFloor, std::abs(numeric) + std::abs(analytic));
}

}  // namespace

namespace acceptance {

GradientCheckSummary RunGradientChecks(int configs, uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  GradientCheckSummary out;
  const double h = 1e-5;
  for (int c = 0; c < configs; ++c) {
    RandomToy t = MakeRandomToy(seed + static_cast<uint64_t>(c) * 7919);
    ++out.configs;
    const int64_t b = static_cast<int64_t>(t.batch.size());
    const int64_t d = t.net.hyper().d_z;

    // Latent input of the joint loss.
    Rng rng(seed + 17 * static_cast<uint64_t>(c));
    Tensor z({b, d});
    for (int64_t i = 0; i < z.size(); ++i) z[i] = rng.Normal();
    auto latent_loss = [&](const Tensor &zv) {
      Tape tape;
      ForwardPass fp(t.net, tape, false, nullptr);
      return t.net.LossFromLatent(fp, tape.Input(zv), t.batch).total_value;
    };
    {
      Tape tape;
      ForwardPass fp(t.net, tape, false, nullptr);
      Var zv = tape.Input(z);
      LossBreakdown lb = t.net.LossFromLatent(fp, zv, t.batch);
      tape.Backward(lb.total);
      const Tensor grad = zv.grad();
      for (int64_t i = 0; i < z.size(); ++i) {
        const double numeric = CentralDifference(z[i], h, [&] { return latent_loss(z); });
        out.max_error_z = std::max(out.max_error_z, RelativeError(numeric, grad[i]));
        if (std::abs(numeric) + std::abs(grad[i]) < kFloor) ++out.below_floor;
        ++out.checked_z;
      }
    }

    // Sampled slices of every weight tensor through the full joint loss.
    auto joint_loss = [&]() {
      Tape tape;
      ForwardPass fp(t.net, tape, false, nullptr);
      return t.net.JointLoss(fp, t.data, t.batch).total_value;
    };
    Tape tape;
    ForwardPass fp(t.net, tape, false, nullptr);
    LossBreakdown lb = t.net.JointLoss(fp, t.data, t.batch);
    tape.Backward(lb.total);
    GradMap grads = tape.ParamGrads();
    for (const std::string &name : t.net.params().names()) {
      Tensor &p = t.net.params().Get(name);
      for (int s = 0; s < 3; ++s) {
        const int64_t i = static_cast<int64_t>(rng.Index(static_cast<uint64_t>(p.size())));
        const double numeric = CentralDifference(p[i], h, joint_loss);
        const double analytic = grads.count(name) ? grads.at(name)[i] : 0.0;
        const double err = RelativeError(numeric, analytic);
        if (std::abs(numeric) + std::abs(analytic) < kFloor) ++out.below_floor;
        if (err > out.max_error_weights) {
          out.max_error_weights = err;
          out.worst_weight = name + "[" + std::to_string(i) + "] " + Sci(numeric) +
                             " " + std::to_string(analytic) + " config " + std::to_string(c);
        }
        ++out.checked_weights;
      }
    }
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace acceptance
