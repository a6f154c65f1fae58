// Copyright 2026 The placetune Authors.
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

#ifndef PLACETUNE_UTIL_RANDOM_HPP
#define PLACETUNE_UTIL_RANDOM_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace placetune::util {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

/// Random source with portable distributions. std::mt19937_64 output is fixed
/// by the standard; the distributions below are written out so results do not
/// depend on the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(hash_combine(seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t bound = n;
    for (;;) {
      unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
      auto low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (-bound) % bound) return static_cast<std::size_t>(m >> 64);
    }
  }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Rounds to one decimal place.
inline double round1(double x) { return std::round(x * 10.0) / 10.0; }
inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace placetune::util

#endif  // PLACETUNE_UTIL_RANDOM_HPP
