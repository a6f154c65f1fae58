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

#ifndef PLACETUNE_MODEL_INSTANCE_HPP
#define PLACETUNE_MODEL_INSTANCE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "placetune/model/scenario.hpp"

namespace placetune::model {

/// Fixed-point quantity in thousandths of a unit. Resource amounts and
/// energies are summed in this representation so that incremental and
/// from-scratch evaluation agree exactly.
using Milli = std::int64_t;

Milli to_milli(double value);
inline double from_milli(Milli value) { return static_cast<double>(value) / 1000.0; }

using MilliVector = std::array<Milli, kResourceKinds>;

inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

struct NfpBound {
  std::size_t nfp;
  double value;
};

/// NFP bounds compiled against the instance's NFP name table.
struct BoundSet {
  std::vector<NfpBound> min;
  std::vector<NfpBound> max;

  bool empty() const { return min.empty() && max.empty(); }
};

struct CompiledRequirement {
  std::size_t type;
  BoundSet bounds;
};

struct ImplInfo {
  std::size_t type;
  std::size_t rankInType;          ///< position in Instance::impls_of_type(type)
  MilliVector req{};
  ResourceVector reqUnits{};
  std::vector<double> provides;    ///< by NFP index; NaN when not provided
  std::vector<CompiledRequirement> requirements;
};

struct HwInfo {
  MilliVector cap{};
  ResourceVector coeff{};
};

/// Edge from a task to one of the child tasks an implementation needs.
struct ChildLink {
  std::size_t task;         ///< global task index of the child slot
  std::size_t requirement;  ///< index into the implementation's requirement list
};

/// One node of the worst-case requirement tree of a request. Children are
/// keyed by (required type, occurrence), so a task always has a single
/// component type.
struct Task {
  std::size_t request = 0;
  std::size_t type = 0;
  std::size_t parent = kNoIndex;
  std::size_t depth = 0;
  /// Child keys from the root: (type index, occurrence) per level.
  std::vector<std::pair<std::size_t, std::size_t>> slotPath;
  std::vector<std::size_t> children;
  /// Implementations admissible for this slot. Root tasks are pruned by the
  /// request's NFP bounds; child slots admit every implementation of the type.
  std::vector<std::size_t> compatible;
  /// Request bounds for root tasks; empty for child tasks, whose bounds come
  /// from the parent implementation's requirement (see Instance::child_bounds).
  BoundSet bounds;
  /// links[rankInType] lists the child slots required by that implementation.
  std::vector<std::vector<ChildLink>> links;

  bool is_root() const { return parent == kNoIndex; }
};

/// Validated, index-based view of a Scenario shared by the solver and the
/// ILP generator. Immutable after construction.
class Instance {
 public:
  /// Validates the scenario and compiles it. Throws ScenarioError on invalid
  /// input, including cyclic component requirements.
  explicit Instance(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }

  std::size_t type_count() const { return typeImpls_.size(); }
  std::size_t impl_count() const { return impls_.size(); }
  std::size_t hw_count() const { return hw_.size(); }
  std::size_t request_count() const { return requestTasks_.size(); }
  std::size_t task_count() const { return tasks_.size(); }

  const ImplInfo& impl(std::size_t i) const { return impls_[i]; }
  const HwInfo& hw(std::size_t h) const { return hw_[h]; }
  const Task& task(std::size_t t) const { return tasks_[t]; }
  const std::vector<Task>& tasks() const { return tasks_; }
  const std::vector<std::size_t>& impls_of_type(std::size_t type) const { return typeImpls_[type]; }

  /// Global task range [first, second) belonging to a request.
  std::pair<std::size_t, std::size_t> request_tasks(std::size_t request) const {
    return requestTasks_[request];
  }

  /// Child slots required when `impl` occupies task `t`.
  const std::vector<ChildLink>& links(std::size_t t, std::size_t impl) const {
    return tasks_[t].links[impls_[impl].rankInType];
  }

  /// Bounds imposed on child slot `link` by the parent implementation.
  const BoundSet& child_bounds(std::size_t parentImpl, const ChildLink& link) const {
    return impls_[parentImpl].requirements[link.requirement].bounds;
  }

  /// Implementations a solver may place on the slot: the compatible set, or
  /// every implementation of the type when nothing is compatible.
  const std::vector<std::size_t>& domain(std::size_t t) const;

  bool satisfies(std::size_t impl, const BoundSet& bounds) const;

  /// Energy of running `impl` on `hw`: sum over kinds of coeff * requirement.
  Milli energy(std::size_t impl, std::size_t hw) const;

  const std::vector<std::string>& nfp_names() const { return nfpNames_; }

  std::size_t type_index(const std::string& id) const { return typeIndex_.at(id); }
  std::size_t impl_index(const std::string& id) const { return implIndex_.at(id); }
  std::size_t hw_index(const std::string& id) const { return hwIndex_.at(id); }

 private:
  BoundSet compile(const NfpMap& min, const NfpMap& max);
  void check_acyclic() const;
  void expand(std::size_t request, std::size_t type, std::size_t parent,
              std::vector<std::pair<std::size_t, std::size_t>> path);

  Scenario scenario_;
  std::vector<std::string> nfpNames_;
  std::map<std::string, std::size_t> nfpIndex_;
  std::map<std::string, std::size_t> typeIndex_;
  std::map<std::string, std::size_t> implIndex_;
  std::map<std::string, std::size_t> hwIndex_;
  std::vector<std::vector<std::size_t>> typeImpls_;
  std::vector<ImplInfo> impls_;
  std::vector<HwInfo> hw_;
  std::vector<Task> tasks_;
  std::vector<std::pair<std::size_t, std::size_t>> requestTasks_;
};

/// Tasks of every request in request order; each request's tasks form a
/// preorder walk of its worst-case requirement tree.
std::vector<Task> decompose_tasks(const Scenario& scenario);

}  // namespace placetune::model

#endif  // PLACETUNE_MODEL_INSTANCE_HPP
