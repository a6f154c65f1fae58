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


#ifndef PLACETUNE_TUNER_REPEATER_HPP
#define PLACETUNE_TUNER_REPEATER_HPP

#include <cstddef>
#include <vector>

namespace placetune::tuner {

struct RepeaterSpec {
  enum class Kind { quantity, student, model_aware_student } kind = Kind::quantity;
  std::size_t count = 2;       ///< quantity: repetitions per configuration
  std::size_t maxReps = 10;    ///< student variants: hard cap
  double relativeCI = 0.05;    ///< student variants: allowed relative half-width
  double relaxFactor = 2.0;    ///< model-aware: threshold multiplier for unpromising configurations

  static RepeaterSpec quantity(std::size_t k) { return {Kind::quantity, k}; }
  static RepeaterSpec student(std::size_t maxReps, double relCI) { return {Kind::student, 0, maxReps, relCI}; }
  static RepeaterSpec model_aware(std::size_t maxReps, double relCI, double relax) {
    return {Kind::model_aware_student, 0, maxReps, relCI, relax};
  }
};

/// Two-sided 95% confidence half-width of the mean: t(0.975, n-1) * s / sqrt(n).
/// Requires at least two finite samples.
double student_half_width(const std::vector<double>& samples);

/// Half-width relative to |mean|; the absolute half-width when the mean is 0.
double student_relative_half_width(const std::vector<double>& samples);

/// true = stop repeating. `samples` are per-repetition objectives (+inf for
/// invalid runs). All-invalid samples stop at once; a mix of valid and
/// invalid runs continues until maxReps. `predictedWorse` relaxes the
/// model-aware threshold.
bool repeater_stop(const RepeaterSpec& spec, const std::vector<double>& samples, bool predictedWorse = false);

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_REPEATER_HPP
