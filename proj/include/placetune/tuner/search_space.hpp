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


#ifndef PLACETUNE_TUNER_SEARCH_SPACE_HPP
#define PLACETUNE_TUNER_SEARCH_SPACE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "placetune/solver/score.hpp"

namespace placetune::tuner {

struct Parameter {
  std::string name;
  std::vector<double> values;
};

/// A configuration is one value index per parameter, in parameter order.
using Configuration = std::vector<std::size_t>;

class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SearchSpace {
 public:
  SearchSpace() = default;
  /// Throws SpaceError on duplicate names or empty value lists.
  explicit SearchSpace(std::vector<Parameter> parameters);

  const std::vector<Parameter>& parameters() const { return params_; }
  std::size_t dimensions() const { return params_.size(); }
  std::size_t levels(std::size_t d) const { return params_[d].values.size(); }

  /// Product of the value-list lengths.
  std::uint64_t size() const { return size_; }

  /// Mixed-radix rank, first parameter most significant.
  std::uint64_t rank(const Configuration& c) const;
  Configuration unrank(std::uint64_t rank) const;

  bool contains(const Configuration& c) const;
  double value(const Configuration& c, std::size_t d) const { return params_[d].values[c[d]]; }
  std::map<std::string, double> values(const Configuration& c) const;

  /// Index lookup by value; throws SpaceError if a value is not listed.
  Configuration from_values(const std::map<std::string, double>& values) const;

  /// "name=value;name=value" in parameter order.
  std::string describe(const Configuration& c) const;

 private:
  std::vector<Parameter> params_;
  std::uint64_t size_ = 1;
};

/// The annealer's five tunable parameters with their discrete value lists.
SearchSpace solver_search_space();

/// Annealer parameters for a configuration of solver_search_space().
solver::SAParams to_solver_params(const SearchSpace& space, const Configuration& c, double timeLimit,
                                  std::uint64_t seed);

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_SEARCH_SPACE_HPP
