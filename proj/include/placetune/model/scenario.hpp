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

#ifndef PLACETUNE_MODEL_SCENARIO_HPP
#define PLACETUNE_MODEL_SCENARIO_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace placetune::model {

/// Sub-components of a hardware unit. The set is closed; every hardware
/// component declares a capacity for each kind.
enum class ResourceKind : std::uint8_t { cpu = 0, ram, disk, network };

inline constexpr std::size_t kResourceKinds = 4;
inline constexpr std::array<ResourceKind, kResourceKinds> kAllResourceKinds{
    ResourceKind::cpu, ResourceKind::ram, ResourceKind::disk, ResourceKind::network};

std::string_view to_string(ResourceKind kind);
ResourceKind resource_kind_from_string(std::string_view name);

/// Amount per resource kind, indexed by ResourceKind.
using ResourceVector = std::array<double, kResourceKinds>;

inline double& at(ResourceVector& v, ResourceKind k) { return v[static_cast<std::size_t>(k)]; }
inline double at(const ResourceVector& v, ResourceKind k) { return v[static_cast<std::size_t>(k)]; }

/// Non-functional property bounds, keyed by NFP name.
using NfpMap = std::map<std::string, double>;

struct HardwareComponent {
  std::string id;
  ResourceVector capacity{};
  ResourceVector energyCoeff{};  ///< energy units per consumed resource unit

  bool operator==(const HardwareComponent&) const = default;
};

struct ComponentType {
  std::string id;
  std::string name;

  bool operator==(const ComponentType&) const = default;
};

struct SubRequirement {
  std::string requiredType;
  NfpMap nfpMin;
  NfpMap nfpMax;

  bool operator==(const SubRequirement&) const = default;
};

/// A flattened implementation/mode pair of a component type.
struct Implementation {
  std::string id;
  std::string ofType;
  NfpMap provides;
  ResourceVector resourceReq{};
  std::vector<SubRequirement> requirements;  // "requires" in scenario files

  bool operator==(const Implementation&) const = default;
};

struct Request {
  std::string id;
  std::string target;
  NfpMap nfpMin;
  NfpMap nfpMax;

  bool operator==(const Request&) const = default;
};

struct ScenarioMeta {
  std::int64_t seed = 0;
  std::string family;

  bool operator==(const ScenarioMeta&) const = default;
};

struct Scenario {
  std::vector<ComponentType> componentTypes;
  std::vector<Implementation> implementations;
  std::vector<HardwareComponent> hardware;
  std::vector<Request> requests;
  ScenarioMeta meta;

  bool operator==(const Scenario&) const = default;
};

/// Raised for structurally invalid scenarios. `what()` names the offending
/// field path or the dangling ids.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks referential integrity, uniqueness of ids, non-negative quantities
/// and min <= max for every bounded NFP. Throws ScenarioError listing every
/// problem found.
void validate(const Scenario& scenario);

}  // namespace placetune::model

#endif  // PLACETUNE_MODEL_SCENARIO_HPP
