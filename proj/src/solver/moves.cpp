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

#include "placetune/solver/moves.hpp"

#include <algorithm>
#include <stdexcept>

#include "placetune/solver/detail.hpp"

namespace placetune::solver {

using model::kResourceKinds;

namespace {
constexpr int kPickAttempts = 8;
constexpr int kKindAttempts = 10;
}  // namespace

ScoreKeeper::ScoreKeeper(const model::Instance& instance, const SAParams& params, Allocation allocation)
    : instance_(&instance), params_(params), allocation_(std::move(allocation)) {
  if (allocation_.size() != instance.task_count()) {
    throw std::invalid_argument("allocation does not match the instance task count");
  }
  const std::size_t n = allocation_.size();
  usage_.assign(instance.hw_count(), model::MilliVector{});
  flag_.assign(n, 0);
  activePos_.assign(n, kNoIndex);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = allocation_.assignments[i];
    detail::check_indices(a, instance);
    if (!a.active) continue;
    activePos_[i] = activeList_.size();
    activeList_.push_back(i);
    if (a.impl != kNoIndex && a.hw != kNoIndex) add_usage(i, +1);
  }
  for (std::size_t i = 0; i < n; ++i) refresh_flag(i);
}

Score ScoreKeeper::score() const {
  return {params_.subComponentUnassignedFactor * overloaded_ + params_.softwareComponentUnassignedFactor * flagged_,
          model::from_milli(energy_)};
}

ViolationCounts ScoreKeeper::counts() const { return {overloaded_, flagged_, energy_}; }

SlotState ScoreKeeper::state(std::size_t slot) const {
  const auto& a = allocation_.assignments[slot];
  return {a.active, a.impl, a.hw};
}

void ScoreKeeper::apply(const Move& move) {
  for (const auto& c : move.changes) set_slot(c.slot, c.after);
}

void ScoreKeeper::undo(const Move& move) {
  for (auto it = move.changes.rbegin(); it != move.changes.rend(); ++it) set_slot(it->slot, it->before);
}

void ScoreKeeper::add_usage(std::size_t slot, int sign) {
  const auto& a = allocation_.assignments[slot];
  const auto& req = instance_->impl(a.impl).req;
  const auto& cap = instance_->hw(a.hw).cap;
  auto& use = usage_[a.hw];
  for (std::size_t k = 0; k < kResourceKinds; ++k) {
    bool before = use[k] > cap[k];
    use[k] += sign * req[k];
    bool after = use[k] > cap[k];
    overloaded_ += static_cast<int>(after) - static_cast<int>(before);
  }
  energy_ += sign * instance_->energy(a.impl, a.hw);
}

bool ScoreKeeper::slot_violates(std::size_t slot) const {
  const auto& a = allocation_.assignments[slot];
  if (!a.active) return instance_->task(slot).is_root();
  return detail::slot_violates(allocation_.assignments, *instance_, slot);
}

void ScoreKeeper::refresh_flag(std::size_t slot) {
  char next = slot_violates(slot) ? 1 : 0;
  flagged_ += next - flag_[slot];
  flag_[slot] = next;
}

void ScoreKeeper::set_slot(std::size_t slot, const SlotState& next) {
  auto& a = allocation_.assignments[slot];
  if (a.active && a.impl != kNoIndex && a.hw != kNoIndex) add_usage(slot, -1);
  const bool wasActive = a.active;
  a.active = next.active;
  a.impl = next.impl;
  a.hw = next.hw;
  if (a.active && a.impl != kNoIndex && a.hw != kNoIndex) add_usage(slot, +1);

  if (wasActive != a.active) {
    if (a.active) {
      activePos_[slot] = activeList_.size();
      activeList_.push_back(slot);
    } else {
      std::size_t pos = activePos_[slot];
      std::size_t last = activeList_.back();
      activeList_[pos] = last;
      activePos_[last] = pos;
      activeList_.pop_back();
      activePos_[slot] = kNoIndex;
    }
  }

  const auto& task = instance_->task(slot);
  refresh_flag(slot);
  if (!task.is_root()) refresh_flag(task.parent);
  for (std::size_t c : task.children) refresh_flag(c);
}

Move move_hwc_change(const ScoreKeeper& keeper, util::Rng& rng) {
  Move m{MoveKind::hwc_change, {}};
  const std::size_t hwCount = keeper.instance().hw_count();
  if (keeper.active_count() == 0 || hwCount < 2) return m;
  std::size_t slot = keeper.active_slot(rng.index(keeper.active_count()));
  SlotState before = keeper.state(slot);
  SlotState after = before;
  if (before.hw == kNoIndex) {
    after.hw = rng.index(hwCount);
  } else {
    after.hw = rng.index(hwCount - 1);
    if (after.hw >= before.hw) ++after.hw;
  }
  m.changes.push_back({slot, before, after});
  return m;
}

Move move_hwc_swap(const ScoreKeeper& keeper, util::Rng& rng) {
  Move m{MoveKind::hwc_swap, {}};
  const std::size_t n = keeper.active_count();
  if (n < 2) return m;
  for (int attempt = 0; attempt < kPickAttempts; ++attempt) {
    std::size_t i = keeper.active_slot(rng.index(n));
    std::size_t j = keeper.active_slot(rng.index(n));
    if (i == j) continue;
    SlotState a = keeper.state(i);
    SlotState b = keeper.state(j);
    if (a.hw == b.hw) continue;
    SlotState a2 = a;
    SlotState b2 = b;
    std::swap(a2.hw, b2.hw);
    m.changes.push_back({i, a, a2});
    m.changes.push_back({j, b, b2});
    return m;
  }
  return m;
}

namespace {

void deactivate_subtree(const ScoreKeeper& keeper, std::size_t slot, Move& m) {
  SlotState before = keeper.state(slot);
  if (!before.active) return;
  SlotState after = before;
  after.active = false;
  m.changes.push_back({slot, before, after});
  for (std::size_t c : keeper.instance().task(slot).children) deactivate_subtree(keeper, c, m);
}

void activate_subtree(const ScoreKeeper& keeper, std::size_t slot, util::Rng& rng, Move& m) {
  SlotState before = keeper.state(slot);
  if (before.active) return;
  const auto& inst = keeper.instance();
  const auto& domain = inst.domain(slot);
  SlotState after{true, domain[rng.index(domain.size())], rng.index(inst.hw_count())};
  m.changes.push_back({slot, before, after});
  for (const auto& link : inst.links(slot, after.impl)) activate_subtree(keeper, link.task, rng, m);
}

}  // namespace

Move move_swc_change(const ScoreKeeper& keeper, util::Rng& rng) {
  Move m{MoveKind::swc_change, {}};
  const auto& inst = keeper.instance();
  const std::size_t n = keeper.active_count();
  if (n == 0) return m;
  for (int attempt = 0; attempt < kPickAttempts; ++attempt) {
    std::size_t slot = keeper.active_slot(rng.index(n));
    const auto& domain = inst.domain(slot);
    SlotState before = keeper.state(slot);
    auto pos = static_cast<std::size_t>(std::find(domain.begin(), domain.end(), before.impl) - domain.begin());
    const bool inDomain = pos < domain.size();
    const std::size_t choices = domain.size() - (inDomain ? 1 : 0);
    if (choices == 0) continue;
    std::size_t k = rng.index(choices);
    if (inDomain && k >= pos) ++k;
    SlotState after = before;
    after.impl = domain[k];
    if (after.hw == kNoIndex) after.hw = rng.index(inst.hw_count());
    m.changes.push_back({slot, before, after});

    static const std::vector<model::ChildLink> kNone;
    const auto& oldLinks = before.impl == kNoIndex ? kNone : inst.links(slot, before.impl);
    const auto& newLinks = inst.links(slot, after.impl);
    auto contains = [](const std::vector<model::ChildLink>& links, std::size_t task) {
      return std::any_of(links.begin(), links.end(), [&](const auto& l) { return l.task == task; });
    };
    for (const auto& l : oldLinks) {
      if (!contains(newLinks, l.task)) deactivate_subtree(keeper, l.task, m);
    }
    for (const auto& l : newLinks) {
      if (!contains(oldLinks, l.task)) activate_subtree(keeper, l.task, rng, m);
    }
    return m;
  }
  return m;
}

Move sample_move(const ScoreKeeper& keeper, util::Rng& rng) {
  for (int attempt = 0; attempt < kKindAttempts; ++attempt) {
    Move m;
    switch (rng.index(3)) {
      case 0: m = move_hwc_change(keeper, rng); break;
      case 1: m = move_hwc_swap(keeper, rng); break;
      default: m = move_swc_change(keeper, rng); break;
    }
    if (!m.noop()) return m;
  }
  return Move{};
}

}  // namespace placetune::solver
