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

#ifndef PLACETUNE_SOLVER_SCORE_HPP
#define PLACETUNE_SOLVER_SCORE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>

namespace placetune::solver {

/// Two-level score. Lower is better on both levels and the hard level
/// dominates: (0, 1000) beats (1, 10).
struct Score {
  std::int64_t hard = 0;  ///< weighted constraint violations
  double soft = 0.0;      ///< total energy

  bool valid() const { return hard == 0; }
  bool operator==(const Score&) const = default;
};

/// True when `a` ranks strictly better than `b`.
inline bool better(const Score& a, const Score& b) {
  return a.hard < b.hard || (a.hard == b.hard && a.soft < b.soft);
}

std::ostream& operator<<(std::ostream& os, const Score& s);

/// Annealer inputs. The first five are the tunable parameters.
struct SAParams {
  std::int64_t subComponentUnassignedFactor = 1;
  std::int64_t softwareComponentUnassignedFactor = 5;
  double hardScoreStartingTemperature = 100;  ///< percent of the initial hard score
  double softScoreStartingTemperature = 100;  ///< percent of the initial soft score
  std::int64_t neighborhoodSize = 50;
  double timeLimit = 10.0;  ///< seconds
  std::uint64_t seed = 0;
};

inline constexpr std::array<double, 8> kFactorValues{1, 2, 3, 5, 10, 100, 1000, 10000};
inline constexpr std::array<double, 10> kTemperatureValues{1, 2, 3, 5, 10, 20, 30, 50, 75, 100};
inline constexpr std::array<double, 8> kNeighborhoodValues{1, 2, 5, 10, 20, 30, 40, 50};

/// The hand-picked configuration: factors 1 / 5, both starting temperatures
/// at 100, neighborhood 50.
inline SAParams default_params() { return SAParams{}; }

/// optimalSoft / solutionSoft, or nullopt when either score is invalid.
/// Two zero-energy scores compare as 1.0.
std::optional<double> quality_ratio(const Score& solution, const Score& optimal);

}  // namespace placetune::solver

#endif  // PLACETUNE_SOLVER_SCORE_HPP
