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

#ifndef PLACETUNE_ILP_EXACT_HPP
#define PLACETUNE_ILP_EXACT_HPP

#include <cstdint>
#include <vector>

#include "placetune/model/instance.hpp"
#include "placetune/solver/allocation.hpp"
#include "placetune/solver/moves.hpp"

namespace placetune::ilp {

enum class ExactStatus : std::uint8_t {
  optimal,         ///< search completed; the assignment is optimal
  feasible,        ///< node budget exhausted with an incumbent
  infeasible,      ///< search completed without any feasible assignment
  budget_exhausted ///< node budget exhausted before any incumbent
};

struct ExactSolution {
  ExactStatus status = ExactStatus::infeasible;
  std::vector<solver::SlotState> assignment;  ///< per task
  double objective = 0.0;
  model::Milli objectiveMilli = 0;
  bool provedOptimal = false;
  std::int64_t nodesExplored = 0;

  bool has_solution() const { return status == ExactStatus::optimal || status == ExactStatus::feasible; }
  solver::Allocation to_allocation(const model::Instance& instance) const;
};

inline constexpr std::int64_t kDefaultNodeBudget = 5'000'000;

/// Depth-first branch and bound over task -> (implementation, hardware)
/// choices on the same compatible sets as build_ilp. Tasks are visited level
/// by level, heavier minimal energy first; values in ascending energy. The
/// bound adds the minimal energy of every slot already known to be required.
ExactSolution exact_solve(const model::Instance& instance, std::int64_t nodeBudget = kDefaultNodeBudget);

}  // namespace placetune::ilp

#endif  // PLACETUNE_ILP_EXACT_HPP
