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


#include "placetune/tuner/repeater.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace placetune::tuner {

double student_half_width(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("half-width needs at least two samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.975);
  return t * sd / std::sqrt(static_cast<double>(n));
}

double student_relative_half_width(const std::vector<double>& samples) {
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  const double half = student_half_width(samples);
  return mean == 0.0 ? half : half / std::abs(mean);
}

bool repeater_stop(const RepeaterSpec& spec, const std::vector<double>& samples, bool predictedWorse) {
  const std::size_t n = samples.size();
  if (n == 0) return false;
  if (spec.kind == RepeaterSpec::Kind::quantity) return n >= std::max<std::size_t>(1, spec.count);

  if (n >= std::max<std::size_t>(1, spec.maxReps)) return true;
  const auto finite = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](double x) { return std::isfinite(x); }));
  if (finite == 0) return true;
  if (finite < n) return false;
  if (n < 2) return false;
  double threshold = spec.relativeCI;
  if (spec.kind == RepeaterSpec::Kind::model_aware_student && predictedWorse) threshold *= spec.relaxFactor;
  return student_relative_half_width(samples) <= threshold;
}

}  // namespace placetune::tuner
