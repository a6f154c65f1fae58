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

#include "placetune/solver/annealer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "placetune/solver/moves.hpp"
#include "placetune/util/random.hpp"

namespace placetune::solver {

namespace {

constexpr double kTemperatureFloor = 1e-9;

class StepClock {
 public:
  explicit StepClock(ClockSpec spec) : spec_(spec), start_(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    if (spec_.is_virtual()) return static_cast<double>(ticks_) / spec_.evaluationsPerSecond;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void tick() { ++ticks_; }

 private:
  ClockSpec spec_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t ticks_ = 0;
};

/// Any move can exist at all: more than one hardware unit, or some slot with
/// an alternative implementation.
bool has_alternatives(const model::Instance& inst) {
  if (inst.task_count() == 0) return false;
  if (inst.hw_count() > 1) return true;
  for (std::size_t t = 0; t < inst.task_count(); ++t) {
    if (inst.domain(t).size() > 1) return true;
  }
  return false;
}

}  // namespace

SolveResult solve(const model::Instance& inst, const SAParams& params, ClockSpec clockSpec) {
  StepClock clock(clockSpec);
  util::Rng rng(params.seed, 23);

  auto initStart = std::chrono::steady_clock::now();
  ScoreKeeper keeper(inst, params, initial_allocation(inst, params.seed));
  SolveResult result;
  result.trace.initSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - initStart).count();

  Score current = keeper.score();
  result.best = keeper.allocation();
  result.bestScore = current;

  auto record = [&](const Score& s) {
    double t = clock.elapsed();
    result.trace.events.push_back({t, s, s.valid()});
    if (s.valid()) {
      if (!result.trace.firstValidAt) result.trace.firstValidAt = t;
      result.trace.lastImprovementAt = t;
    }
  };
  record(current);

  const double hardStart =
      params.hardScoreStartingTemperature / 100.0 * std::max<double>(1.0, static_cast<double>(current.hard));
  const double softStart = std::max(kTemperatureFloor, params.softScoreStartingTemperature / 100.0 * current.soft);
  const std::int64_t neighborhood = std::max<std::int64_t>(1, params.neighborhoodSize);
  const bool searchable = has_alternatives(inst);

  Move chosen;
  Score chosenScore;
  while (searchable && clock.elapsed() < params.timeLimit) {
    const double remaining = std::max(0.0, 1.0 - clock.elapsed() / params.timeLimit);
    const double hardTemp = std::max(kTemperatureFloor, hardStart * remaining);
    const double softTemp = std::max(kTemperatureFloor, softStart * remaining);

    bool haveCandidate = false;
    for (std::int64_t c = 0; c < neighborhood; ++c) {
      Move m = sample_move(keeper, rng);
      if (m.noop()) continue;
      keeper.apply(m);
      Score s = keeper.score();
      keeper.undo(m);
      clock.tick();
      ++result.trace.candidateScorings;
      if (!haveCandidate || better(s, chosenScore)) {
        chosen = std::move(m);
        chosenScore = s;
        haveCandidate = true;
      }
    }
    ++result.trace.steps;
    if (!haveCandidate) {
      clock.tick();
      continue;
    }

    bool accept = !better(current, chosenScore);
    if (!accept) {
      double dHard = static_cast<double>(std::max<std::int64_t>(0, chosenScore.hard - current.hard));
      double dSoft = std::max(0.0, chosenScore.soft - current.soft);
      double p = std::exp(-dHard / hardTemp) * std::exp(-dSoft / softTemp);
      accept = rng.uniform() < p;
    }
    if (!accept) continue;

    keeper.apply(chosen);
    current = chosenScore;
    if (better(current, result.bestScore)) {
      result.bestScore = current;
      result.best = keeper.allocation();
      record(current);
    }
  }
  result.trace.elapsed = clock.elapsed();
  return result;
}

}  // namespace placetune::solver
