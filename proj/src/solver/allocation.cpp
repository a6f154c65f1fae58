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

#include "placetune/solver/allocation.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "placetune/solver/detail.hpp"
#include "placetune/util/random.hpp"

namespace placetune::solver {

using model::Instance;
using model::kResourceKinds;
using model::Milli;
using model::MilliVector;

std::size_t compute_max_assignments(const model::Scenario& scenario, const model::Request& request) {
  std::map<std::string, std::vector<const model::Implementation*>> implsOf;
  for (const auto& impl : scenario.implementations) implsOf[impl.ofType].push_back(&impl);

  std::map<std::string, std::size_t> memo;
  std::set<std::string> onPath;
  auto count = [&](auto&& self, const std::string& type) -> std::size_t {
    if (auto it = memo.find(type); it != memo.end()) return it->second;
    if (!onPath.insert(type).second) {
      throw model::ScenarioError("cyclic component requirements through type '" + type + "'");
    }
    // Child slots are keyed by (required type, occurrence); the worst case
    // takes the union of keys over all implementations of the type.
    std::set<std::pair<std::string, std::size_t>> keys;
    for (const auto* impl : implsOf[type]) {
      std::map<std::string, std::size_t> seen;
      for (const auto& sub : impl->requirements) keys.emplace(sub.requiredType, seen[sub.requiredType]++);
    }
    std::size_t total = 1;
    for (const auto& key : keys) total += self(self, key.first);
    onPath.erase(type);
    memo[type] = total;
    return total;
  };
  return count(count, request.target);
}

namespace {

std::size_t pick_fitting_hw(const Instance& inst, std::size_t impl, util::Rng& rng,
                            std::vector<std::size_t>& scratch) {
  scratch.clear();
  const auto& req = inst.impl(impl).req;
  for (std::size_t h = 0; h < inst.hw_count(); ++h) {
    const auto& cap = inst.hw(h).cap;
    bool fits = true;
    for (std::size_t k = 0; k < kResourceKinds && fits; ++k) fits = req[k] <= cap[k];
    if (fits) scratch.push_back(h);
  }
  if (scratch.empty()) return rng.index(inst.hw_count());
  return scratch[rng.index(scratch.size())];
}

}  // namespace

Allocation initial_allocation(const Instance& inst, std::uint64_t seed) {
  util::Rng rng(seed, 11);
  Allocation alloc;
  alloc.assignments.resize(inst.task_count());
  for (std::size_t t = 0; t < inst.task_count(); ++t) {
    alloc.assignments[t].task = t;
    alloc.assignments[t].request = inst.task(t).request;
  }
  std::vector<std::size_t> scratch;
  auto activate = [&](auto&& self, std::size_t t) -> void {
    auto& a = alloc.assignments[t];
    const auto& domain = inst.domain(t);
    a.active = true;
    a.impl = domain[rng.index(domain.size())];
    a.hw = pick_fitting_hw(inst, a.impl, rng, scratch);
    for (const auto& link : inst.links(t, a.impl)) self(self, link.task);
  };
  for (std::size_t r = 0; r < inst.request_count(); ++r) activate(activate, inst.request_tasks(r).first);
  return alloc;
}

Allocation allocation_from_witness(const Instance& inst, const std::vector<model::WitnessEntry>& witness) {
  Allocation alloc;
  alloc.assignments.resize(inst.task_count());
  for (std::size_t t = 0; t < inst.task_count(); ++t) {
    alloc.assignments[t].task = t;
    alloc.assignments[t].request = inst.task(t).request;
  }
  for (const auto& w : witness) {
    auto& a = alloc.assignments.at(w.task);
    a.active = true;
    a.impl = w.impl;
    a.hw = w.hw;
  }
  return alloc;
}

namespace detail {

bool slot_violates(const std::vector<ComponentAssignment>& slots, const Instance& inst, std::size_t i) {
  const auto& a = slots[i];
  if (a.impl == kNoIndex || a.hw == kNoIndex) return true;
  const auto& task = inst.task(i);
  if (inst.impl(a.impl).type != task.type) return true;
  if (task.is_root()) {
    if (!inst.satisfies(a.impl, task.bounds)) return true;
  } else {
    const auto& p = slots[task.parent];
    if (!p.active || p.impl == kNoIndex || inst.impl(p.impl).type != inst.task(task.parent).type) return true;
    const model::ChildLink* mine = nullptr;
    for (const auto& link : inst.links(task.parent, p.impl)) {
      if (link.task == i) {
        mine = &link;
        break;
      }
    }
    if (mine == nullptr || !inst.satisfies(a.impl, inst.child_bounds(p.impl, *mine))) return true;
  }
  for (const auto& link : inst.links(i, a.impl)) {
    if (!slots[link.task].active) return true;
  }
  return false;
}

void check_indices(const ComponentAssignment& a, const Instance& inst) {
  if (a.impl != kNoIndex && a.impl >= inst.impl_count()) {
    throw std::out_of_range("slot " + std::to_string(a.task) + ": dangling implementation index " + std::to_string(a.impl));
  }
  if (a.hw != kNoIndex && a.hw >= inst.hw_count()) {
    throw std::out_of_range("slot " + std::to_string(a.task) + ": dangling hardware index " + std::to_string(a.hw));
  }
}

}  // namespace detail

ViolationCounts count_violations(const Allocation& allocation, const Instance& inst) {
  if (allocation.size() != inst.task_count()) {
    throw std::invalid_argument("allocation has " + std::to_string(allocation.size()) + " slots, instance has " +
                                std::to_string(inst.task_count()) + " tasks");
  }
  const auto& slots = allocation.assignments;
  std::vector<MilliVector> usage(inst.hw_count(), MilliVector{});
  ViolationCounts out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& a = slots[i];
    detail::check_indices(a, inst);
    if (!a.active) {
      if (inst.task(i).is_root()) ++out.unsatisfiedSlots;
      continue;
    }
    if (a.impl != kNoIndex && a.hw != kNoIndex) {
      const auto& req = inst.impl(a.impl).req;
      for (std::size_t k = 0; k < kResourceKinds; ++k) usage[a.hw][k] += req[k];
      out.energy += inst.energy(a.impl, a.hw);
    }
    if (detail::slot_violates(slots, inst, i)) ++out.unsatisfiedSlots;
  }
  for (std::size_t h = 0; h < usage.size(); ++h) {
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      if (usage[h][k] > inst.hw(h).cap[k]) ++out.overloadedResources;
    }
  }
  return out;
}

Score score(const Allocation& allocation, const Instance& inst, const SAParams& params) {
  auto c = count_violations(allocation, inst);
  return {params.subComponentUnassignedFactor * c.overloadedResources +
              params.softwareComponentUnassignedFactor * c.unsatisfiedSlots,
          model::from_milli(c.energy)};
}

namespace {

bool within(const model::NfpMap& provides, const model::NfpMap& min, const model::NfpMap& max) {
  for (const auto& [name, lo] : min) {
    auto it = provides.find(name);
    if (it == provides.end() || !(it->second >= lo)) return false;
  }
  for (const auto& [name, hi] : max) {
    auto it = provides.find(name);
    if (it == provides.end() || !(it->second <= hi)) return false;
  }
  return true;
}

}  // namespace

ValidationReport check_allocation(const Allocation& allocation, const Instance& inst) {
  ValidationReport report;
  auto problem = [&](std::string msg) {
    report.valid = false;
    report.problems.push_back(std::move(msg));
  };
  if (allocation.size() != inst.task_count()) {
    problem("allocation size does not match the task count");
    return report;
  }
  const auto& sc = inst.scenario();
  const auto& slots = allocation.assignments;
  std::vector<char> walked(slots.size(), 0);

  auto walk = [&](auto&& self, std::size_t t, const model::NfpMap& min, const model::NfpMap& max) -> void {
    walked[t] = 1;
    const auto& a = slots[t];
    const std::string where = "slot " + std::to_string(t);
    if (!a.active) return problem(where + " is required but inactive");
    if (a.impl >= sc.implementations.size() || a.hw >= sc.hardware.size()) {
      return problem(where + " has no implementation or hardware");
    }
    const auto& impl = sc.implementations[a.impl];
    const auto& typeId = sc.componentTypes[inst.task(t).type].id;
    if (impl.ofType != typeId) return problem(where + " holds " + impl.id + " which is not of type " + typeId);
    if (!within(impl.provides, min, max)) problem(where + ": " + impl.id + " misses its NFP bounds");

    std::map<std::string, std::size_t> seen;
    for (const auto& sub : impl.requirements) {
      std::pair<std::size_t, std::size_t> key{inst.type_index(sub.requiredType), seen[sub.requiredType]++};
      std::size_t child = kNoIndex;
      for (std::size_t c : inst.task(t).children) {
        if (inst.task(c).slotPath.back() == key) child = c;
      }
      if (child == kNoIndex) {
        problem(where + ": no slot for requirement on " + sub.requiredType);
        continue;
      }
      self(self, child, sub.nfpMin, sub.nfpMax);
    }
  };
  for (std::size_t r = 0; r < sc.requests.size(); ++r) {
    walk(walk, inst.request_tasks(r).first, sc.requests[r].nfpMin, sc.requests[r].nfpMax);
  }
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (slots[t].active && !walked[t]) problem("slot " + std::to_string(t) + " is active but not required");
  }

  std::vector<MilliVector> usage(sc.hardware.size(), MilliVector{});
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (!walked[t] || !slots[t].active) continue;
    const auto& a = slots[t];
    if (a.impl >= sc.implementations.size() || a.hw >= sc.hardware.size()) continue;
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      usage[a.hw][k] += model::to_milli(sc.implementations[a.impl].resourceReq[k]);
    }
  }
  for (std::size_t h = 0; h < usage.size(); ++h) {
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      if (usage[h][k] > model::to_milli(sc.hardware[h].capacity[k])) {
        problem(sc.hardware[h].id + "." + std::string(model::to_string(model::kAllResourceKinds[k])) + " over capacity");
      }
    }
  }
  return report;
}

}  // namespace placetune::solver
