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

#ifndef PLACETUNE_SOLVER_MOVES_HPP
#define PLACETUNE_SOLVER_MOVES_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "placetune/model/instance.hpp"
#include "placetune/solver/allocation.hpp"
#include "placetune/solver/score.hpp"
#include "placetune/util/random.hpp"

namespace placetune::solver {

struct SlotState {
  bool active = false;
  std::size_t impl = kNoIndex;
  std::size_t hw = kNoIndex;

  bool operator==(const SlotState&) const = default;
};

struct SlotChange {
  std::size_t slot;
  SlotState before;
  SlotState after;
};

enum class MoveKind : std::uint8_t { hwc_change, hwc_swap, swc_change };

/// Undoable delta over slot states. An empty change list is the no-op
/// marker returned when the move kind has no alternative to offer.
struct Move {
  MoveKind kind = MoveKind::hwc_change;
  std::vector<SlotChange> changes;

  bool noop() const { return changes.empty(); }
};

/// Allocation plus the bookkeeping needed to rescore a move in time
/// proportional to the slots it touches: per-(hardware, kind) usage, the
/// number of overloaded pairs, per-slot violation flags and total energy.
class ScoreKeeper {
 public:
  ScoreKeeper(const model::Instance& instance, const SAParams& params, Allocation allocation);

  const Allocation& allocation() const { return allocation_; }
  const model::Instance& instance() const { return *instance_; }

  Score score() const;
  ViolationCounts counts() const;

  void apply(const Move& move);
  void undo(const Move& move);

  std::size_t active_count() const { return activeList_.size(); }
  std::size_t active_slot(std::size_t k) const { return activeList_[k]; }
  SlotState state(std::size_t slot) const;

 private:
  void set_slot(std::size_t slot, const SlotState& next);
  void add_usage(std::size_t slot, int sign);
  void refresh_flag(std::size_t slot);
  bool slot_violates(std::size_t slot) const;

  const model::Instance* instance_;
  SAParams params_;
  Allocation allocation_;
  std::vector<model::MilliVector> usage_;
  std::int64_t overloaded_ = 0;
  std::vector<char> flag_;
  std::int64_t flagged_ = 0;
  model::Milli energy_ = 0;
  std::vector<std::size_t> activeList_;
  std::vector<std::size_t> activePos_;
};

/// Moves a random active slot to a different hardware unit.
Move move_hwc_change(const ScoreKeeper& keeper, util::Rng& rng);

/// Exchanges the hardware of two active slots that sit on different units.
Move move_hwc_swap(const ScoreKeeper& keeper, util::Rng& rng);

/// Replaces the implementation of a random active slot with another one of
/// the same type. Slots only the old implementation required are
/// deactivated (with their subtrees); slots only the new one requires are
/// activated and filled randomly. No pool entries are created.
Move move_swc_change(const ScoreKeeper& keeper, util::Rng& rng);

/// Uniform choice among the three kinds, resampling when a kind returns the
/// no-op marker. Returns a no-op only if every attempt failed.
Move sample_move(const ScoreKeeper& keeper, util::Rng& rng);

}  // namespace placetune::solver

#endif  // PLACETUNE_SOLVER_MOVES_HPP
