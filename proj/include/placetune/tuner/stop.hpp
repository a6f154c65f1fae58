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


#ifndef PLACETUNE_TUNER_STOP_HPP
#define PLACETUNE_TUNER_STOP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace placetune::tuner {

struct StopSpec {
  enum class Kind { quantity, adaptive, time, improvement, guaranteed } kind = Kind::quantity;
  double value = 0.0;      ///< count, fraction or seconds; unused by guaranteed
  bool mandatory = false;  ///< mandatory conditions are AND-composed, the rest OR-composed

  static StopSpec quantity(std::uint64_t n) { return {Kind::quantity, static_cast<double>(n)}; }
  static StopSpec adaptive(double fraction) { return {Kind::adaptive, fraction}; }
  static StopSpec time(double seconds) { return {Kind::time, seconds}; }
  static StopSpec improvement(std::uint64_t n) { return {Kind::improvement, static_cast<double>(n)}; }
  static StopSpec guaranteed(bool mandatory = false) { return {Kind::guaranteed, 0.0, mandatory}; }
};

/// Experiment state seen by stop conditions.
struct StopView {
  std::uint64_t measured = 0;
  std::uint64_t spaceSize = 0;
  double elapsed = 0.0;
  std::uint64_t sinceImprovement = 0;
  std::optional<double> best;           ///< best objective so far
  std::optional<double> defaultObjective;  ///< objective of the measured default configuration
};

std::string to_string(StopSpec::Kind kind);
std::string describe(const StopSpec& spec);

bool stop_fires(const StopSpec& spec, const StopView& view);

/// AND over mandatory conditions combined with OR over the others; a group
/// without members does not constrain. Returns the firing description (for
/// reports) or nullopt. An empty list never stops.
std::optional<std::string> should_stop(const std::vector<StopSpec>& specs, const StopView& view);

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_STOP_HPP
