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

#include "placetune/ilp/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace placetune::ilp {

using model::Instance;
using model::kResourceKinds;
using model::Milli;

solver::Allocation ExactSolution::to_allocation(const Instance& inst) const {
  solver::Allocation alloc;
  alloc.assignments.resize(inst.task_count());
  for (std::size_t t = 0; t < inst.task_count(); ++t) {
    auto& a = alloc.assignments[t];
    a.task = t;
    a.request = inst.task(t).request;
    if (t < assignment.size()) {
      a.active = assignment[t].active;
      a.impl = assignment[t].impl;
      a.hw = assignment[t].hw;
    }
  }
  return alloc;
}

namespace {

constexpr Milli kNoValue = 1'000'000'000'000'000;  // sentinel minimum for slots without values

struct Value {
  Milli energy;
  std::size_t impl;
  std::size_t hw;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, std::int64_t budget) : inst_(inst), budget_(budget) {
    const std::size_t T = inst.task_count();
    values_.resize(T);
    minEnergy_.assign(T, kNoValue);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t s : inst.task(t).compatible) {
        for (std::size_t h = 0; h < inst.hw_count(); ++h) values_[t].push_back({inst.energy(s, h), s, h});
      }
      std::sort(values_[t].begin(), values_[t].end(), [](const Value& a, const Value& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.impl != b.impl) return a.impl < b.impl;
        return a.hw < b.hw;
      });
      if (!values_[t].empty()) minEnergy_[t] = values_[t].front().energy;
    }
    order_.resize(T);
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      const auto& ta = inst.task(a);
      const auto& tb = inst.task(b);
      if (ta.depth != tb.depth) return ta.depth < tb.depth;
      if (minEnergy_[a] != minEnergy_[b]) return minEnergy_[a] > minEnergy_[b];
      return a < b;
    });
    choice_.assign(T, solver::SlotState{});
    required_.assign(T, 0);
    bounds_.assign(T, nullptr);
    usage_.assign(inst.hw_count(), model::MilliVector{});
    for (std::size_t r = 0; r < inst.request_count(); ++r) {
      std::size_t root = inst.request_tasks(r).first;
      required_[root] = 1;
      pending_ += minEnergy_[root];
    }
  }

  ExactSolution run() {
    dfs(0);
    ExactSolution out;
    out.nodesExplored = nodes_;
    if (haveIncumbent_) {
      out.assignment = incumbent_;
      out.objectiveMilli = best_;
      out.objective = model::from_milli(best_);
      out.status = aborted_ ? ExactStatus::feasible : ExactStatus::optimal;
      out.provedOptimal = !aborted_;
    } else {
      out.assignment.assign(inst_.task_count(), solver::SlotState{});
      out.status = aborted_ ? ExactStatus::budget_exhausted : ExactStatus::infeasible;
    }
    return out;
  }

 private:
  bool fits(const Value& v) const {
    const auto& req = inst_.impl(v.impl).req;
    const auto& cap = inst_.hw(v.hw).cap;
    const auto& use = usage_[v.hw];
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      if (use[k] + req[k] > cap[k]) return false;
    }
    return true;
  }

  void dfs(std::size_t pos) {
    if (aborted_) return;
    if (pos == order_.size()) {
      if (!haveIncumbent_ || energy_ < best_) {
        best_ = energy_;
        incumbent_ = choice_;
        haveIncumbent_ = true;
      }
      return;
    }
    const std::size_t t = order_[pos];
    if (!required_[t]) {
      dfs(pos + 1);
      return;
    }
    pending_ -= minEnergy_[t];
    for (const Value& v : values_[t]) {
      if (haveIncumbent_ && energy_ + v.energy + pending_ >= best_) break;
      if (bounds_[t] != nullptr && !inst_.satisfies(v.impl, *bounds_[t])) continue;
      if (!fits(v)) continue;
      if (++nodes_ > budget_) {
        aborted_ = true;
        break;
      }
      const auto& links = inst_.links(t, v.impl);
      Milli childMin = 0;
      for (const auto& l : links) childMin += minEnergy_[l.task];
      if (haveIncumbent_ && energy_ + v.energy + pending_ + childMin >= best_) continue;

      const auto& req = inst_.impl(v.impl).req;
      choice_[t] = {true, v.impl, v.hw};
      for (std::size_t k = 0; k < kResourceKinds; ++k) usage_[v.hw][k] += req[k];
      energy_ += v.energy;
      for (const auto& l : links) {
        required_[l.task] = 1;
        bounds_[l.task] = &inst_.child_bounds(v.impl, l);
      }
      pending_ += childMin;

      dfs(pos + 1);

      pending_ -= childMin;
      for (const auto& l : links) {
        required_[l.task] = 0;
        bounds_[l.task] = nullptr;
      }
      energy_ -= v.energy;
      for (std::size_t k = 0; k < kResourceKinds; ++k) usage_[v.hw][k] -= req[k];
      choice_[t] = solver::SlotState{};
      if (aborted_) break;
    }
    pending_ += minEnergy_[t];
  }

  const Instance& inst_;
  std::int64_t budget_;
  std::vector<std::vector<Value>> values_;
  std::vector<Milli> minEnergy_;
  std::vector<std::size_t> order_;
  std::vector<solver::SlotState> choice_;
  std::vector<char> required_;
  std::vector<const model::BoundSet*> bounds_;
  std::vector<model::MilliVector> usage_;
  Milli energy_ = 0;
  Milli pending_ = 0;
  Milli best_ = std::numeric_limits<Milli>::max();
  bool haveIncumbent_ = false;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
  std::vector<solver::SlotState> incumbent_;
};

}  // namespace

ExactSolution exact_solve(const Instance& instance, std::int64_t nodeBudget) {
  return BranchAndBound(instance, nodeBudget).run();
}

}  // namespace placetune::ilp
