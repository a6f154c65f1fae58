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

#ifndef PLACETUNE_MODEL_SCENARIO_IO_HPP
#define PLACETUNE_MODEL_SCENARIO_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "placetune/model/scenario.hpp"

namespace placetune::model {

/// Schema identifier written to and required from every scenario file.
inline constexpr std::string_view kScenarioFormat = "placetune-scenario/1";

/// Serializes to the scenario document (JSON, keys sorted, two-space indent,
/// trailing newline). Output is byte-stable for equal scenarios.
std::string to_scenario_text(const Scenario& scenario);

/// Parses and validates. Errors are ScenarioError naming the field path
/// (e.g. "implementations[2].resourceReq.cpu") or the dangling ids.
Scenario parse_scenario_text(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace placetune::model

#endif  // PLACETUNE_MODEL_SCENARIO_IO_HPP
