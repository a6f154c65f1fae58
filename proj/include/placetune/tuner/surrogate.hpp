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


#ifndef PLACETUNE_TUNER_SURROGATE_HPP
#define PLACETUNE_TUNER_SURROGATE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "placetune/tuner/search_space.hpp"

namespace placetune::tuner {

struct Observation {
  Configuration config;
  double objective;  ///< may be +inf for invalid measurements
};

struct SurrogateOptions {
  std::size_t minSamples = 20;
  double threshold = 0.85;  ///< cross-validated R^2
  std::size_t folds = 5;
};

/// Quadratic response surface over ordinal ranks scaled to [0, 1]:
/// intercept, linear, squared and pairwise interaction terms.
class Surrogate {
 public:
  double predict(const Configuration& c) const;
  double cv_r2() const { return cvR2_; }
  const std::vector<double>& coefficients() const { return coef_; }

  static std::size_t feature_count(std::size_t dimensions);
  static void features(const SearchSpace& space, const Configuration& c, std::vector<double>& out);

 private:
  friend std::optional<Surrogate> fit_and_validate(const std::vector<Observation>&, const SearchSpace&,
                                                   const SurrogateOptions&);
  const SearchSpace* space_ = nullptr;
  std::vector<double> coef_;
  double cvR2_ = 0.0;
};

/// Fits on all observations and validates by k-fold cross validation.
/// Returns nullopt ("not validated") below the sample gate, on a rank
/// deficient design, when no objective is finite, or when R^2 < threshold.
/// Infinite objectives are fitted as twice the largest finite magnitude.
/// The returned model refers to `space`, which must outlive it.
std::optional<Surrogate> fit_and_validate(const std::vector<Observation>& observations, const SearchSpace& space,
                                          const SurrogateOptions& options = {});

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_SURROGATE_HPP
