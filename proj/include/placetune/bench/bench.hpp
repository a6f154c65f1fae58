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


#ifndef PLACETUNE_BENCH_BENCH_HPP
#define PLACETUNE_BENCH_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "placetune/ilp/exact.hpp"
#include "placetune/ilp/ilp_model.hpp"
#include "placetune/model/scenario.hpp"
#include "placetune/solver/annealer.hpp"
#include "placetune/tuner/experiment.hpp"

namespace placetune::bench {

struct RunConfig {
  double timeLimit = 10.0;
  bool virtualClock = true;
  double evaluationsPerSecond = 20000.0;
  std::uint64_t seed = 0;
  std::int64_t oracleBudget = ilp::kDefaultNodeBudget;
  std::uint64_t ilpNonzeroLimit = 50'000'000;  // larger programs are not built
  std::size_t workers = 1;                     // > 1: solver runs go through a local worker pool

  solver::ClockSpec clock() const {
    return virtualClock ? solver::ClockSpec::virtual_clock(evaluationsPerSecond) : solver::ClockSpec::wall();
  }
};

struct NamedScenario {
  std::string name;
  model::Scenario scenario;
};

/// Generated table families for the given rows (0..12).
std::vector<NamedScenario> table_scenarios(const std::vector<std::size_t>& rows, std::int64_t seed);

struct MhOutcome {
  solver::Score score;
  std::optional<double> firstValidAt;
  std::optional<double> lastImprovementAt;
  std::optional<double> initSeconds;  // wall clock; absent for pooled runs
};

struct TableRow {
  std::string scenario;
  std::size_t implementations = 0;
  std::size_t resources = 0;
  ilp::IlpSize ilpSize;
  std::optional<double> ilpSeconds;  // absent when the program exceeds the nonzero limit
  ilp::ExactStatus oracleStatus = ilp::ExactStatus::budget_exhausted;
  std::optional<solver::Score> optimum;
  MhOutcome manual;
  MhOutcome tuned;
};

std::vector<TableRow> table_rows(const std::vector<NamedScenario>& scenarios, const solver::SAParams& manualParams,
                                 const solver::SAParams& tunedParams, const RunConfig& config);
/// Fixed header; "✗" marks an invalid result, "n/a" a missing optimum.
/// Under the virtual clock wall-time columns print "-".
std::string table_csv(const std::vector<TableRow>& rows, const RunConfig& config);
std::string bench_table(const std::vector<NamedScenario>& scenarios, const solver::SAParams& manualParams,
                        const solver::SAParams& tunedParams, const RunConfig& config);

struct ScalingRow {
  std::size_t hwCount = 0;
  ilp::IlpSize ilpSize;
  std::optional<double> ilpSeconds;    // median over repeats
  double mhInitSeconds = 0.0;          // median
  std::optional<double> mhFirstValid;  // median; absent when any repeat found nothing valid
  std::optional<double> window;        // median of ilpSeconds - mhFirstValid
};

/// Chain family sweep: `requests` requests, chains of `chainLength`, one
/// scenario per hardware count. Time columns are medians over `repeats` runs.
std::vector<ScalingRow> scaling_rows(std::size_t requests, std::size_t chainLength,
                                     const std::vector<std::size_t>& hwCounts, const solver::SAParams& params,
                                     const RunConfig& config, std::size_t repeats = 1);
std::string scaling_csv(const std::vector<ScalingRow>& rows, const RunConfig& config);

struct TraceRow {
  double elapsed;
  std::int64_t hard;
  double soft;
  double normalizedValidity;
  std::optional<double> qualityRatio;
};

struct TraceReport {
  std::vector<TraceRow> rows;
  bool haveOptimum = false;
  solver::Score optimum;
  solver::SolveResult solve;
};

/// Quality-over-time: normalized validity is 1 - hard/initialHard (1 when the
/// start is already valid); quality is optimum/current once valid. Without an
/// optimum the last column holds the raw soft score.
TraceReport trace_report(const model::Scenario& scenario, const solver::SAParams& params, const RunConfig& config);
std::string trace_csv(const TraceReport& report);
std::string bench_trace(const model::Scenario& scenario, const solver::SAParams& params, const RunConfig& config);

/// Plain solver trace: elapsed_s,hard,soft,valid.
std::string solve_trace_csv(const solver::SolveTrace& trace);

struct ProductionRun {
  std::uint64_t seed;
  solver::Score manual;
  solver::Score tuned;
};

struct TuneReport {
  tuner::ExperimentResult experiment;
  solver::SAParams tunedParams;
  std::vector<ProductionRun> production;
  std::string experimentCsv;
  std::string comparisonCsv;
};

/// Tunes the solver on `scenario` with the given settings (per-evaluation
/// limit from settings), then runs default and tuned parameters side by side
/// at the production limit for `productionSeeds` seeds.
TuneReport bench_tune(const tuner::TunerSettings& settings, const model::Scenario& scenario, const RunConfig& config,
                      std::size_t productionSeeds = 5);

/// Median of finite values; invalid scores rank last.
double median_soft(const std::vector<solver::Score>& scores);

}  // namespace placetune::bench

#endif  // PLACETUNE_BENCH_BENCH_HPP
