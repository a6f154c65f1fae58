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

#include "placetune/solver/score.hpp"

namespace placetune::solver {

std::ostream& operator<<(std::ostream& os, const Score& s) {
  return os << s.hard << "hard/" << s.soft << "soft";
}

std::optional<double> quality_ratio(const Score& solution, const Score& optimal) {
  if (!solution.valid() || !optimal.valid()) return std::nullopt;
  if (solution.soft == 0.0) return 1.0;
  return optimal.soft / solution.soft;
}

}  // namespace placetune::solver
