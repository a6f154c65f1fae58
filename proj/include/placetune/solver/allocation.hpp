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

#ifndef PLACETUNE_SOLVER_ALLOCATION_HPP
#define PLACETUNE_SOLVER_ALLOCATION_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "placetune/model/generator.hpp"
#include "placetune/model/instance.hpp"
#include "placetune/solver/score.hpp"

namespace placetune::solver {

using model::kNoIndex;

/// Pre-allocated slot of the worst-case pool. Slot i of an Allocation
/// corresponds to task i of the Instance, which fixes its request and its
/// path in the requirement tree. Inactive slots keep whatever they last held.
struct ComponentAssignment {
  std::size_t task = 0;
  std::size_t request = 0;
  bool active = false;
  std::size_t impl = kNoIndex;
  std::size_t hw = kNoIndex;

  bool operator==(const ComponentAssignment&) const = default;
};

struct Allocation {
  std::vector<ComponentAssignment> assignments;

  std::size_t size() const { return assignments.size(); }
  bool operator==(const Allocation&) const = default;
};

/// Worst-case slot count for a request, computed directly from the scenario
/// by recursion over component types. Throws model::ScenarioError on cyclic
/// requirements.
std::size_t compute_max_assignments(const model::Scenario& scenario, const model::Request& request);

/// Worst-case pool with random implementations (from each slot's domain) and
/// random hardware (preferring units that can host the implementation alone)
/// on the active slots. Validity is not required.
Allocation initial_allocation(const model::Instance& instance, std::uint64_t seed);

/// Allocation holding exactly the generator's witness.
Allocation allocation_from_witness(const model::Instance& instance,
                                   const std::vector<model::WitnessEntry>& witness);

/// Straight-line, from-scratch scoring. Throws std::out_of_range on dangling
/// implementation or hardware indices.
Score score(const Allocation& allocation, const model::Instance& instance, const SAParams& params);

/// Hard-violation breakdown before factors are applied.
struct ViolationCounts {
  std::int64_t overloadedResources = 0;  ///< (hardware unit, kind) pairs over capacity
  std::int64_t unsatisfiedSlots = 0;     ///< active slots breaking C2/C3 or structure, plus unserved roots
  model::Milli energy = 0;
};

ViolationCounts count_violations(const Allocation& allocation, const model::Instance& instance);

/// Independent validity check: walks every request's tree from its root
/// along the chosen implementations and confirms that exactly the walked
/// slots are active, every NFP bound holds and no resource is overloaded.
struct ValidationReport {
  bool valid = true;
  std::vector<std::string> problems;
};

ValidationReport check_allocation(const Allocation& allocation, const model::Instance& instance);

}  // namespace placetune::solver

#endif  // PLACETUNE_SOLVER_ALLOCATION_HPP
