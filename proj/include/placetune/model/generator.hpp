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

#ifndef PLACETUNE_MODEL_GENERATOR_HPP
#define PLACETUNE_MODEL_GENERATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "placetune/model/scenario.hpp"

namespace placetune::model {

/// Shape of a synthetic scenario.
///
/// Requests are grouped into applications (two requests per application).
/// Each application is a full component-type tree of `softwareDepth` levels
/// where every inner type has `branching` child types. A type carries
/// `branching` implementations by default; implementation j of an inner type
/// requires child types 0..(j mod branching), so implementations differ in
/// how much of the subtree they pull in.
///
/// Hardware count is round(hardwareScale * requests * typesPerApplication),
/// at least one, unless `hardwareCount` overrides it.
struct GeneratorParams {
  std::size_t requests = 1;
  double hardwareScale = 1.0;
  std::size_t softwareDepth = 1;
  std::size_t branching = 1;
  std::int64_t seed = 0;
  /// Exact total implementation count, spread round-robin over all types.
  std::optional<std::size_t> implementationCount;
  /// Exact hardware count.
  std::optional<std::size_t> hardwareCount;
  std::string family = "custom";
};

/// One active slot of the generator's witness solution. `task` indexes the
/// Instance task list built from the generated scenario.
struct WitnessEntry {
  std::size_t task;
  std::size_t impl;
  std::size_t hw;
};

struct GeneratedScenario {
  Scenario scenario;
  std::vector<WitnessEntry> witness;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic for fixed parameters. Every request is served by the
/// recorded witness; throws GeneratorError("unsatisfiable generator
/// parameters ...") when no witness placement is found after bounded retries.
GeneratedScenario generate_with_witness(const GeneratorParams& params);

Scenario generate_scenario(const GeneratorParams& params);

inline Scenario generate_scenario(std::size_t requests, double hardwareScale, std::size_t softwareDepth,
                                  std::size_t branching, std::int64_t seed) {
  GeneratorParams p;
  p.requests = requests;
  p.hardwareScale = hardwareScale;
  p.softwareDepth = softwareDepth;
  p.branching = branching;
  p.seed = seed;
  return generate_scenario(p);
}

/// Families shaped after the evaluation table: rows 0..12 (trivial, small,
/// medium, large, huge; each with basic / much hardware / complex software
/// variants), hitting the published implementation and resource counts.
GeneratorParams table_family(std::size_t row, std::int64_t seed);
inline constexpr std::size_t kTableFamilyRows = 13;

/// Scaling family: `requests` requests each asking for a chain of
/// `chainLength` component types, with exactly `hwCount` hardware units.
GeneratorParams chain_family(std::size_t requests, std::size_t chainLength, std::size_t hwCount,
                             std::int64_t seed);

}  // namespace placetune::model

#endif  // PLACETUNE_MODEL_GENERATOR_HPP
