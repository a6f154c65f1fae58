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

#ifndef PLACETUNE_SOLVER_DETAIL_HPP
#define PLACETUNE_SOLVER_DETAIL_HPP

#include <cstddef>
#include <vector>

#include "placetune/model/instance.hpp"
#include "placetune/solver/allocation.hpp"

namespace placetune::solver::detail {

/// Whether an active slot breaks C2/C3 or the tree structure: unset
/// implementation or hardware, wrong type, NFP bounds missed, no parent link,
/// or a required child slot inactive.
bool slot_violates(const std::vector<ComponentAssignment>& slots, const model::Instance& inst, std::size_t i);

void check_indices(const ComponentAssignment& a, const model::Instance& inst);

}  // namespace placetune::solver::detail

#endif  // PLACETUNE_SOLVER_DETAIL_HPP
