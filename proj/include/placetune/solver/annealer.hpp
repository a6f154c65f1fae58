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

#ifndef PLACETUNE_SOLVER_ANNEALER_HPP
#define PLACETUNE_SOLVER_ANNEALER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "placetune/model/instance.hpp"
#include "placetune/solver/allocation.hpp"
#include "placetune/solver/score.hpp"

namespace placetune::solver {

/// Time source for a solve. The virtual clock advances by one tick per
/// candidate scoring, which makes whole traces reproducible.
struct ClockSpec {
  enum class Kind { wall, virtual_steps } kind = Kind::wall;
  double evaluationsPerSecond = 20000.0;

  static ClockSpec wall() { return {}; }
  static ClockSpec virtual_clock(double evaluationsPerSecond = 20000.0) {
    return {Kind::virtual_steps, evaluationsPerSecond};
  }
  bool is_virtual() const { return kind == Kind::virtual_steps; }
};

struct TraceEvent {
  double elapsed;
  Score score;
  bool valid;
};

/// Best-ever score over time: the initial solution, then every improvement.
struct SolveTrace {
  std::vector<TraceEvent> events;
  std::optional<double> firstValidAt;
  std::optional<double> lastImprovementAt;  ///< last improvement of a valid solution
  std::int64_t steps = 0;
  std::int64_t candidateScorings = 0;
  double initSeconds = 0.0;  ///< wall time spent building the initial allocation
  double elapsed = 0.0;      ///< clock reading when the search stopped
};

struct SolveResult {
  Allocation best;
  Score bestScore;
  SolveTrace trace;
};

/// Simulated annealing until params.timeLimit. Each step scores
/// params.neighborhoodSize sampled moves, keeps the best candidate and
/// accepts it when it is not worse, otherwise with probability
/// exp(-dHard/T_hard) * exp(-dSoft/T_soft). Temperatures start at the given
/// percentage of the initial score and fall linearly to a small floor.
SolveResult solve(const model::Instance& instance, const SAParams& params,
                  ClockSpec clock = ClockSpec::wall());

}  // namespace placetune::solver

#endif  // PLACETUNE_SOLVER_ANNEALER_HPP
