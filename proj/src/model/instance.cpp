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

#include "placetune/model/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace placetune::model {

Milli to_milli(double value) { return static_cast<Milli>(std::llround(value * 1000.0)); }

Instance::Instance(Scenario scenario) : scenario_(std::move(scenario)) {
  validate(scenario_);
  const auto& s = scenario_;

  for (std::size_t i = 0; i < s.componentTypes.size(); ++i) typeIndex_[s.componentTypes[i].id] = i;
  typeImpls_.resize(s.componentTypes.size());

  auto register_nfps = [this](const NfpMap& m) {
    for (const auto& [name, _] : m) {
      if (nfpIndex_.emplace(name, nfpNames_.size()).second) nfpNames_.push_back(name);
    }
  };
  for (const auto& impl : s.implementations) {
    register_nfps(impl.provides);
    for (const auto& sub : impl.requirements) {
      register_nfps(sub.nfpMin);
      register_nfps(sub.nfpMax);
    }
  }
  for (const auto& r : s.requests) {
    register_nfps(r.nfpMin);
    register_nfps(r.nfpMax);
  }

  impls_.reserve(s.implementations.size());
  for (std::size_t i = 0; i < s.implementations.size(); ++i) {
    const auto& src = s.implementations[i];
    implIndex_[src.id] = i;
    ImplInfo info;
    info.type = typeIndex_.at(src.ofType);
    info.rankInType = typeImpls_[info.type].size();
    typeImpls_[info.type].push_back(i);
    info.reqUnits = src.resourceReq;
    for (std::size_t k = 0; k < kResourceKinds; ++k) info.req[k] = to_milli(src.resourceReq[k]);
    info.provides.assign(nfpNames_.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [name, v] : src.provides) info.provides[nfpIndex_.at(name)] = v;
    for (const auto& sub : src.requirements) {
      info.requirements.push_back({typeIndex_.at(sub.requiredType), compile(sub.nfpMin, sub.nfpMax)});
    }
    impls_.push_back(std::move(info));
  }

  hw_.reserve(s.hardware.size());
  for (std::size_t h = 0; h < s.hardware.size(); ++h) {
    const auto& src = s.hardware[h];
    hwIndex_[src.id] = h;
    HwInfo info;
    info.coeff = src.energyCoeff;
    for (std::size_t k = 0; k < kResourceKinds; ++k) info.cap[k] = to_milli(src.capacity[k]);
    hw_.push_back(info);
  }

  check_acyclic();

  for (std::size_t r = 0; r < s.requests.size(); ++r) {
    std::size_t first = tasks_.size();
    expand(r, typeIndex_.at(s.requests[r].target), kNoIndex, {});
    Task& root = tasks_[first];
    root.bounds = compile(s.requests[r].nfpMin, s.requests[r].nfpMax);
    root.compatible.clear();
    for (std::size_t impl : typeImpls_[root.type]) {
      if (satisfies(impl, root.bounds)) root.compatible.push_back(impl);
    }
    requestTasks_.emplace_back(first, tasks_.size());
  }
}

BoundSet Instance::compile(const NfpMap& min, const NfpMap& max) {
  BoundSet b;
  for (const auto& [name, v] : min) b.min.push_back({nfpIndex_.at(name), v});
  for (const auto& [name, v] : max) b.max.push_back({nfpIndex_.at(name), v});
  return b;
}

void Instance::check_acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> color(typeImpls_.size(), 0);
  std::vector<std::size_t> stack;
  auto visit = [&](auto&& self, std::size_t t) -> void {
    color[t] = 1;
    stack.push_back(t);
    for (std::size_t impl : typeImpls_[t]) {
      for (const auto& req : impls_[impl].requirements) {
        if (color[req.type] == 1) {
          std::string cycle;
          auto it = std::find(stack.begin(), stack.end(), req.type);
          for (; it != stack.end(); ++it) cycle += scenario_.componentTypes[*it].id + " -> ";
          cycle += scenario_.componentTypes[req.type].id;
          throw ScenarioError("cyclic component requirements: " + cycle);
        }
        if (color[req.type] == 0) self(self, req.type);
      }
    }
    stack.pop_back();
    color[t] = 2;
  };
  for (std::size_t t = 0; t < typeImpls_.size(); ++t) {
    if (color[t] == 0) visit(visit, t);
  }
}

void Instance::expand(std::size_t request, std::size_t type, std::size_t parent,
                      std::vector<std::pair<std::size_t, std::size_t>> path) {
  std::size_t self = tasks_.size();
  {
    Task task;
    task.request = request;
    task.type = type;
    task.parent = parent;
    task.depth = path.size();
    task.slotPath = path;
    task.compatible = typeImpls_[type];
    task.links.resize(typeImpls_[type].size());
    tasks_.push_back(std::move(task));
  }

  // Union of child keys over all implementations, in first-appearance order.
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> implKeys;
  for (std::size_t impl : typeImpls_[type]) {
    std::map<std::size_t, std::size_t> seen;
    std::vector<std::pair<std::size_t, std::size_t>> mine;
    for (const auto& req : impls_[impl].requirements) {
      std::pair<std::size_t, std::size_t> key{req.type, seen[req.type]++};
      mine.push_back(key);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    implKeys.push_back(std::move(mine));
  }

  std::vector<std::size_t> childTask(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    childTask[k] = tasks_.size();
    auto childPath = path;
    childPath.push_back(keys[k]);
    expand(request, keys[k].first, self, std::move(childPath));
    tasks_[self].children.push_back(childTask[k]);
  }

  const auto& impls = typeImpls_[type];
  for (std::size_t rank = 0; rank < impls.size(); ++rank) {
    auto& out = tasks_[self].links[rank];
    for (std::size_t j = 0; j < implKeys[rank].size(); ++j) {
      auto pos = std::find(keys.begin(), keys.end(), implKeys[rank][j]) - keys.begin();
      out.push_back({childTask[static_cast<std::size_t>(pos)], j});
    }
  }
}

const std::vector<std::size_t>& Instance::domain(std::size_t t) const {
  const Task& task = tasks_[t];
  return task.compatible.empty() ? typeImpls_[task.type] : task.compatible;
}

bool Instance::satisfies(std::size_t impl, const BoundSet& bounds) const {
  const auto& prov = impls_[impl].provides;
  for (const auto& b : bounds.min) {
    double v = prov[b.nfp];
    if (std::isnan(v) || v < b.value) return false;
  }
  for (const auto& b : bounds.max) {
    double v = prov[b.nfp];
    if (std::isnan(v) || v > b.value) return false;
  }
  return true;
}

Milli Instance::energy(std::size_t impl, std::size_t hw) const {
  const auto& req = impls_[impl].reqUnits;
  const auto& coeff = hw_[hw].coeff;
  double e = 0.0;
  for (std::size_t k = 0; k < kResourceKinds; ++k) e += coeff[k] * req[k];
  return to_milli(e);
}

std::vector<Task> decompose_tasks(const Scenario& scenario) {
  return Instance(scenario).tasks();
}

}  // namespace placetune::model
