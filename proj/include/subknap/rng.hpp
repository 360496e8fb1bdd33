// Copyright 2026 The Authors.
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

#ifndef SUBKNAP_RNG_HPP
#define SUBKNAP_RNG_HPP

#include <cstdint>
#include <random>

namespace subknap {

// splitmix64 step; used to derive independent per-task seeds so that chunked
// or parallel sampling stays reproducible for a fixed (seed, task) pair.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled uniform draws. The engine's output sequence is
// specified by the standard; std::uniform_* distributions are not, so they
// are avoided for reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform on {lo, ..., hi} inclusive, by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<std::int64_t>(next_u64());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  // Index in [0, weights.size()) drawn proportionally to nonnegative weights
  // summing to at most 1; returns -1 with the leftover probability.
  int pick_or_none(const std::vector<double>& weights) {
    double u = next_unit();
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (u < weights[k]) return static_cast<int>(k);
      u -= weights[k];
    }
    return -1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace subknap

#endif  // SUBKNAP_RNG_HPP
