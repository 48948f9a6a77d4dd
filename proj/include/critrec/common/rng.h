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

#ifndef CRITREC_COMMON_RNG_H_
#define CRITREC_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace critrec {

// Seeded generator with portable sampling routines. The standard
// distributions are implementation-defined, so everything that must be
// byte-reproducible goes through here instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n). n must be positive.
  uint64_t Index(uint64_t n);
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  // k distinct indices from [0, n), in sampling order. Requires k <= n.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

  template <typename T>
  void Shuffle(std::vector<T> &values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = Index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a, used to derive per-owner seeds from a run seed.
uint64_t HashString(std::string_view text);
uint64_t MixSeed(uint64_t seed, std::string_view salt);

}  // namespace critrec

#endif  // CRITREC_COMMON_RNG_H_
