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

#ifndef PLACETUNE_TESTS_FIXTURES_HPP
#define PLACETUNE_TESTS_FIXTURES_HPP

#include <string>

#include "placetune/model/scenario.hpp"

namespace fixtures {

using placetune::model::HardwareComponent;
using placetune::model::Implementation;
using placetune::model::Request;
using placetune::model::ResourceVector;
using placetune::model::Scenario;
using placetune::model::SubRequirement;

inline HardwareComponent hw(const std::string& id, double cap, double coeff = 1.0) {
  return {id, ResourceVector{cap, cap, cap, cap}, ResourceVector{coeff, coeff, coeff, coeff}};
}

inline Implementation impl(const std::string& id, const std::string& type, double cpu,
                           std::vector<std::string> children = {}) {
  Implementation i{id, type, {}, ResourceVector{cpu, 0, 0, 0}, {}};
  for (auto& c : children) i.requirements.push_back(SubRequirement{c, {}, {}});
  return i;
}

/// One type, one implementation, one hardware unit, one request.
inline Scenario trivial() {
  Scenario s;
  s.componentTypes = {{"A", "A"}};
  s.implementations = {impl("a0", "A", 1.0)};
  s.hardware = {hw("h0", 10.0, 2.0)};
  s.requests = {Request{"r0", "A", {}, {}}};
  s.meta.family = "trivial";
  return s;
}

/// Type A with a1 -> {B} and a2 -> {B, C}; B and C are leaves.
inline Scenario branch_pair(std::size_t hwCount = 2, double cap = 10.0) {
  Scenario s;
  s.componentTypes = {{"A", "A"}, {"B", "B"}, {"C", "C"}};
  s.implementations = {impl("a1", "A", 1.0, {"B"}), impl("a2", "A", 1.0, {"B", "C"}), impl("b0", "B", 1.0),
                       impl("b1", "B", 2.0), impl("c0", "C", 1.0)};
  for (std::size_t h = 0; h < hwCount; ++h) s.hardware.push_back(hw("h" + std::to_string(h), cap, 1.0 + h));
  s.requests = {Request{"r0", "A", {}, {}}};
  return s;
}

/// Chain T0 -> T1 -> ... of `length` types with one implementation each.
inline Scenario chain(std::size_t length, std::size_t hwCount, double cap = 100.0) {
  Scenario s;
  for (std::size_t i = 0; i < length; ++i) {
    std::string t = "T" + std::to_string(i);
    s.componentTypes.push_back({t, t});
    std::vector<std::string> kids;
    if (i + 1 < length) kids.push_back("T" + std::to_string(i + 1));
    s.implementations.push_back(impl("s" + std::to_string(i), t, 1.0, kids));
  }
  for (std::size_t h = 0; h < hwCount; ++h) s.hardware.push_back(hw("h" + std::to_string(h), cap, 1.0));
  s.requests = {Request{"r0", "T0", {}, {}}};
  return s;
}

}  // namespace fixtures

#endif  // PLACETUNE_TESTS_FIXTURES_HPP
