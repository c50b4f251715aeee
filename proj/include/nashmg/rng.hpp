// Copyright 2026 The nashmg Authors
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

#ifndef NASHMG_RNG_HPP_
#define NASHMG_RNG_HPP_

#include <cstdint>
#include <random>

#include "nashmg/errors.hpp"

namespace nashmg {

// splitmix64 finalizer.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// i-th element of the splitmix64 stream seeded at `master`. Run seeds are
// derived as derive_seed(master, run_index), so appending runs to an
// experiment never perturbs the streams of existing runs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Deterministic uniform source. mt19937_64 output is bit-exact across
// platforms; the [0,1) conversion avoids std::uniform_real_distribution,
// whose output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Single-draw inverse-CDF sample from an unnormalized weight table. The last
// positive entry absorbs any round-off shortfall in the cumulative sum.
inline int sample_categorical(const double* weights, int n, double u) {
  double acc = 0.0;
  int last_positive = -1;
  for (int i = 0; i < n; ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  if (last_positive < 0) {
    throw NumericError("sample_categorical: no positive weight");
  }
  return last_positive;
}

}  // namespace nashmg

#endif  // NASHMG_RNG_HPP_
