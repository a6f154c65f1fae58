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

#ifndef PLACETUNE_ILP_ILP_MODEL_HPP
#define PLACETUNE_ILP_ILP_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "placetune/model/instance.hpp"
#include "placetune/model/scenario.hpp"

namespace placetune::ilp {

/// Binary decision x[task, impl, hw].
struct Variable {
  std::size_t task;
  std::size_t impl;
  std::size_t hw;
};

enum class Sense : std::uint8_t { le, eq };

enum class RowKind : std::uint8_t {
  assignment,  ///< root: exactly one choice; child: as many choices as the parent demands
  utilization, ///< C1 for one (hardware, resource kind)
  subrequirement, ///< C3 implication for one (task, impl, hw, required child)
};

struct Row {
  RowKind kind;
  Sense sense;
  double rhs;
  std::size_t begin;  ///< range into IlpModel::columns / coefficients
  std::size_t end;
  std::size_t a;  ///< task for assignment/subrequirement rows, hw for utilization
  std::size_t b;  ///< resource kind for utilization, variable for subrequirement
  std::size_t c;  ///< child task for subrequirement
};

/// Binary program over (task, compatible implementation, hardware) triples.
/// Request NFP bounds prune variables instead of adding rows.
class IlpModel {
 public:
  std::vector<Variable> variables;
  std::vector<double> objective;  ///< energy per variable
  std::vector<Row> rows;
  std::vector<std::uint32_t> columns;
  std::vector<double> coefficients;

  std::size_t variable_count() const { return variables.size(); }
  std::size_t row_count() const { return rows.size(); }
  std::size_t nonzero_count() const { return columns.size(); }
  std::size_t row_count(RowKind kind) const;

  std::span<const std::uint32_t> row_columns(const Row& r) const {
    return {columns.data() + r.begin, r.end - r.begin};
  }
  std::span<const double> row_coefficients(const Row& r) const {
    return {coefficients.data() + r.begin, r.end - r.begin};
  }

  /// Index of x[task, impl, hw]; kNoIndex if the triple was pruned.
  std::size_t variable_index(std::size_t task, std::size_t impl, std::size_t hw) const;

  /// Per-task first variable and the compatible implementation list used
  /// for indexing; variables of task t occupy a contiguous block.
  std::vector<std::size_t> taskBase;
  std::vector<std::vector<std::size_t>> taskImpls;
  std::size_t hwCount = 0;
};

struct BuildResult {
  IlpModel model;
  double generationSeconds = 0.0;
};

/// Builds the program from the compiled instance. Variable count equals
/// sum over tasks of |compatible impls| * |hardware|.
IlpModel build_ilp(const model::Instance& instance);

/// Compiles the scenario and builds the program, timing both steps together.
/// Throws model::ScenarioError on cyclic requirements.
BuildResult build_ilp(const model::Scenario& scenario);

struct IlpSize {
  std::uint64_t variables = 0;
  std::uint64_t rows = 0;
  std::uint64_t nonzeros = 0;
};

/// Exact dimensions of build_ilp(instance) without materializing it.
IlpSize ilp_size(const model::Instance& instance);

/// Writes CPLEX-style LP text: Minimize / Subject To / Binary / End.
/// Output is byte-stable for a fixed model.
std::string to_lp_text(const IlpModel& model);
void export_lp(const IlpModel& model, const std::filesystem::path& path);

}  // namespace placetune::ilp

#endif  // PLACETUNE_ILP_ILP_MODEL_HPP
