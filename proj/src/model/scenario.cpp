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

#include "placetune/model/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace placetune::model {

std::string_view to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::cpu: return "cpu";
    case ResourceKind::ram: return "ram";
    case ResourceKind::disk: return "disk";
    case ResourceKind::network: return "network";
  }
  return "?";
}

ResourceKind resource_kind_from_string(std::string_view name) {
  for (auto k : kAllResourceKinds) {
    if (to_string(k) == name) return k;
  }
  throw ScenarioError("unknown resource kind '" + std::string(name) + "'");
}

namespace {

void check_bounds(const NfpMap& min, const NfpMap& max, const std::string& where,
                  std::vector<std::string>& problems) {
  for (const auto& [name, lo] : min) {
    auto it = max.find(name);
    if (it != max.end() && lo > it->second) {
      problems.push_back(where + ": nfpMin." + name + " exceeds nfpMax." + name);
    }
  }
}

void check_vector(const ResourceVector& v, const std::string& where,
                  std::vector<std::string>& problems) {
  for (auto k : kAllResourceKinds) {
    double x = at(v, k);
    if (!std::isfinite(x) || x < 0) {
      problems.push_back(where + "." + std::string(to_string(k)) + " must be a finite non-negative number");
    }
  }
}

}  // namespace

void validate(const Scenario& s) {
  std::vector<std::string> problems;
  std::vector<std::string> dangling;

  std::set<std::string> types;
  for (std::size_t i = 0; i < s.componentTypes.size(); ++i) {
    if (!types.insert(s.componentTypes[i].id).second) {
      problems.push_back("componentTypes[" + std::to_string(i) + "].id: duplicate id '" +
                         s.componentTypes[i].id + "'");
    }
  }

  std::set<std::string> implIds;
  std::set<std::string> typesWithImpl;
  for (std::size_t i = 0; i < s.implementations.size(); ++i) {
    const auto& impl = s.implementations[i];
    std::string where = "implementations[" + std::to_string(i) + "]";
    if (!implIds.insert(impl.id).second) problems.push_back(where + ".id: duplicate id '" + impl.id + "'");
    if (!types.count(impl.ofType)) dangling.push_back(impl.ofType);
    typesWithImpl.insert(impl.ofType);
    check_vector(impl.resourceReq, where + ".resourceReq", problems);
    for (std::size_t j = 0; j < impl.requirements.size(); ++j) {
      const auto& sub = impl.requirements[j];
      std::string subWhere = where + ".requires[" + std::to_string(j) + "]";
      if (!types.count(sub.requiredType)) dangling.push_back(sub.requiredType);
      check_bounds(sub.nfpMin, sub.nfpMax, subWhere, problems);
    }
  }

  std::set<std::string> hwIds;
  for (std::size_t i = 0; i < s.hardware.size(); ++i) {
    const auto& hw = s.hardware[i];
    std::string where = "hardware[" + std::to_string(i) + "]";
    if (!hwIds.insert(hw.id).second) problems.push_back(where + ".id: duplicate id '" + hw.id + "'");
    check_vector(hw.capacity, where + ".capacity", problems);
    check_vector(hw.energyCoeff, where + ".energyCoeff", problems);
  }

  std::set<std::string> requestIds;
  std::set<std::string> referenced;
  for (std::size_t i = 0; i < s.requests.size(); ++i) {
    const auto& r = s.requests[i];
    std::string where = "requests[" + std::to_string(i) + "]";
    if (!requestIds.insert(r.id).second) problems.push_back(where + ".id: duplicate id '" + r.id + "'");
    if (!types.count(r.target)) dangling.push_back(r.target);
    referenced.insert(r.target);
    check_bounds(r.nfpMin, r.nfpMax, where, problems);
  }
  for (const auto& impl : s.implementations) {
    for (const auto& sub : impl.requirements) referenced.insert(sub.requiredType);
  }
  for (const auto& t : referenced) {
    if (types.count(t) && !typesWithImpl.count(t)) {
      problems.push_back("component type '" + t + "' is referenced but has no implementation");
    }
  }
  if (!s.requests.empty() && s.hardware.empty()) {
    problems.push_back("hardware: at least one hardware component is required to serve requests");
  }

  if (problems.empty() && dangling.empty()) return;
  std::ostringstream msg;
  msg << "invalid scenario:";
  if (!dangling.empty()) {
    std::set<std::string> unique(dangling.begin(), dangling.end());
    msg << " dangling component type ids:";
    for (const auto& d : unique) msg << " '" << d << "'";
    msg << ";";
  }
  for (const auto& p : problems) msg << " " << p << ";";
  throw ScenarioError(msg.str());
}

}  // namespace placetune::model
