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


#include "placetune/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "placetune/model/generator.hpp"
#include "placetune/model/instance.hpp"
#include "placetune/model/scenario_io.hpp"
#include "placetune/orchestrator/coordinator.hpp"
#include "placetune/tuner/search_space.hpp"

namespace placetune::bench {

namespace {

constexpr const char* kInvalid = "\xe2\x9c\x97";  // ✗
constexpr const char* kValid = "\xe2\x9c\x93";    // ✓

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string seconds(double v) { return fixed(v, 6); }

std::string optional_seconds(const std::optional<double>& v, const char* missing) {
  return v ? seconds(*v) : std::string(missing);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

MhOutcome outcome_of(const solver::SolveResult& r) {
  return {r.bestScore, r.trace.firstValidAt, r.trace.lastImprovementAt, r.trace.initSeconds};
}

MhOutcome outcome_of(const orchestrator::ResultMsg& r) {
  MhOutcome o;
  o.score = {r.status == orchestrator::ResultStatus::ok ? r.hardScore : std::numeric_limits<std::int64_t>::max(),
             r.softScore};
  if (r.status == orchestrator::ResultStatus::ok && !r.valid && o.score.hard == 0) o.score.hard = 1;
  o.firstValidAt = r.firstValidAt;
  o.lastImprovementAt = r.lastImprovementAt;
  return o;
}

orchestrator::TaskMsg task_for(std::uint64_t id, const std::string& scenarioText, const solver::SAParams& p,
                               const RunConfig& config) {
  orchestrator::TaskMsg t;
  t.taskId = id;
  t.scenarioInline = scenarioText;
  t.configuration = {{"subComponentUnassignedFactor", static_cast<double>(p.subComponentUnassignedFactor)},
                     {"softwareComponentUnassignedFactor", static_cast<double>(p.softwareComponentUnassignedFactor)},
                     {"hardScoreStartingTemperature", p.hardScoreStartingTemperature},
                     {"softScoreStartingTemperature", p.softScoreStartingTemperature},
                     {"neighborhoodSize", static_cast<double>(p.neighborhoodSize)}};
  t.timeLimit = p.timeLimit;
  t.seed = p.seed;
  t.virtualClock = config.virtualClock;
  t.evaluationsPerSecond = config.evaluationsPerSecond;
  return t;
}

solver::SAParams with_run(solver::SAParams p, const RunConfig& config, std::uint64_t seed) {
  p.timeLimit = config.timeLimit;
  p.seed = seed;
  return p;
}

std::string validity(const solver::Score& s) { return s.valid() ? kValid : kInvalid; }

std::string quality(const MhOutcome& o, const std::optional<solver::Score>& optimum) {
  if (!o.score.valid()) return kInvalid;
  if (!optimum) return "n/a";
  return fixed(*solver::quality_ratio(o.score, *optimum), 4);
}

const char* status_name(ilp::ExactStatus s) {
  switch (s) {
    case ilp::ExactStatus::optimal: return "optimal";
    case ilp::ExactStatus::feasible: return "feasible";
    case ilp::ExactStatus::infeasible: return "infeasible";
    case ilp::ExactStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

}  // namespace

std::vector<NamedScenario> table_scenarios(const std::vector<std::size_t>& rows, std::int64_t seed) {
  std::vector<NamedScenario> out;
  for (std::size_t r : rows) {
    auto params = model::table_family(r, seed);
    out.push_back({std::to_string(r) + ":" + params.family, model::generate_scenario(params)});
  }
  return out;
}

std::vector<TableRow> table_rows(const std::vector<NamedScenario>& scenarios, const solver::SAParams& manualParams,
                                 const solver::SAParams& tunedParams, const RunConfig& config) {
  std::vector<TableRow> rows;
  std::vector<std::shared_ptr<model::Instance>> instances;
  for (const auto& ns : scenarios) {
    TableRow row;
    row.scenario = ns.name;
    row.implementations = ns.scenario.implementations.size();
    row.resources = ns.scenario.hardware.size();
    auto start = std::chrono::steady_clock::now();
    auto inst = std::make_shared<model::Instance>(ns.scenario);
    row.ilpSize = ilp::ilp_size(*inst);
    if (row.ilpSize.nonzeros <= config.ilpNonzeroLimit) {
      auto m = ilp::build_ilp(*inst);
      row.ilpSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    auto exact = ilp::exact_solve(*inst, config.oracleBudget);
    row.oracleStatus = exact.status;
    if (exact.status == ilp::ExactStatus::optimal) {
      row.optimum = solver::Score{0, exact.objective};
    }
    instances.push_back(inst);
    rows.push_back(std::move(row));
  }

  if (config.workers <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].manual = outcome_of(solver::solve(*instances[i], with_run(manualParams, config, config.seed), config.clock()));
      rows[i].tuned = outcome_of(solver::solve(*instances[i], with_run(tunedParams, config, config.seed), config.clock()));
    }
    return rows;
  }

  orchestrator::CoordinatorOptions opts;
  orchestrator::LocalWorkerPool pool(config.workers, opts);
  std::vector<orchestrator::TaskMsg> tasks;
  for (const auto& ns : scenarios) {
    const std::string text = model::to_scenario_text(ns.scenario);
    tasks.push_back(task_for(tasks.size() + 1, text, with_run(manualParams, config, config.seed), config));
    tasks.push_back(task_for(tasks.size() + 1, text, with_run(tunedParams, config, config.seed), config));
  }
  auto results = pool.coordinator().run(tasks);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].manual = outcome_of(results[2 * i]);
    rows[i].tuned = outcome_of(results[2 * i + 1]);
  }
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows, const RunConfig& config) {
  std::string out =
      "scenario,implementations,resources,manual_valid,tuned_valid,oracle_status,optimal_soft,manual_quality,"
      "tuned_quality,manual_soft,tuned_soft,mh_init_s,ilp_gen_s,ilp_variables,manual_first_valid_s,"
      "manual_last_improvement_s,tuned_first_valid_s,tuned_last_improvement_s\n";
  const bool wall = !config.virtualClock;
  for (const auto& r : rows) {
    out += r.scenario + "," + std::to_string(r.implementations) + "," + std::to_string(r.resources) + ",";
    out += validity(r.manual.score) + "," + validity(r.tuned.score) + ",";
    out += std::string(status_name(r.oracleStatus)) + ",";
    out += (r.optimum ? fixed(r.optimum->soft, 3) : std::string("n/a")) + ",";
    out += quality(r.manual, r.optimum) + "," + quality(r.tuned, r.optimum) + ",";
    out += (r.manual.score.valid() ? fixed(r.manual.score.soft, 3) : std::string(kInvalid)) + ",";
    out += (r.tuned.score.valid() ? fixed(r.tuned.score.soft, 3) : std::string(kInvalid)) + ",";
    out += (wall && r.manual.initSeconds ? seconds(*r.manual.initSeconds) : std::string("-")) + ",";
    out += (!r.ilpSeconds ? std::string(kInvalid) : wall ? seconds(*r.ilpSeconds) : std::string("-")) + ",";
    out += std::to_string(r.ilpSize.variables) + ",";
    out += optional_seconds(r.manual.firstValidAt, kInvalid) + ",";
    out += optional_seconds(r.manual.lastImprovementAt, kInvalid) + ",";
    out += optional_seconds(r.tuned.firstValidAt, kInvalid) + ",";
    out += optional_seconds(r.tuned.lastImprovementAt, kInvalid) + "\n";
  }
  return out;
}

std::string bench_table(const std::vector<NamedScenario>& scenarios, const solver::SAParams& manualParams,
                        const solver::SAParams& tunedParams, const RunConfig& config) {
  return table_csv(table_rows(scenarios, manualParams, tunedParams, config), config);
}

std::vector<ScalingRow> scaling_rows(std::size_t requests, std::size_t chainLength,
                                     const std::vector<std::size_t>& hwCounts, const solver::SAParams& params,
                                     const RunConfig& config, std::size_t repeats) {
  std::vector<ScalingRow> rows;
  repeats = std::max<std::size_t>(1, repeats);
  for (std::size_t hwc : hwCounts) {
    ScalingRow row;
    row.hwCount = hwc;
    const model::Scenario scenario =
        model::generate_scenario(model::chain_family(requests, chainLength, hwc, static_cast<std::int64_t>(config.seed)));
    std::vector<double> ilpTimes, initTimes, firstValid, windows;
    bool allValid = true;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      auto start = std::chrono::steady_clock::now();
      model::Instance inst(scenario);
      if (rep == 0) row.ilpSize = ilp::ilp_size(inst);
      std::optional<double> ilpTime;
      if (row.ilpSize.nonzeros <= config.ilpNonzeroLimit) {
        auto m = ilp::build_ilp(inst);
        ilpTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ilpTimes.push_back(*ilpTime);
      }
      model::Instance solveInst(scenario);
      auto res = solver::solve(solveInst, with_run(params, config, config.seed + rep), config.clock());
      initTimes.push_back(res.trace.initSeconds);
      if (!res.trace.firstValidAt) {
        allValid = false;
        continue;
      }
      firstValid.push_back(*res.trace.firstValidAt);
      if (ilpTime) windows.push_back(*ilpTime - *res.trace.firstValidAt);
    }
    if (!ilpTimes.empty()) row.ilpSeconds = median(ilpTimes);
    row.mhInitSeconds = median(initTimes);
    if (allValid) {
      row.mhFirstValid = median(firstValid);
      if (windows.size() == repeats) row.window = median(windows);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows, const RunConfig& config) {
  std::string out = "hw_count,ilp_variables,ilp_rows,ilp_nonzeros,ilp_gen_s,mh_init_s,mh_first_valid_s,window_s\n";
  const bool wall = !config.virtualClock;
  for (const auto& r : rows) {
    out += std::to_string(r.hwCount) + "," + std::to_string(r.ilpSize.variables) + "," +
           std::to_string(r.ilpSize.rows) + "," + std::to_string(r.ilpSize.nonzeros) + ",";
    out += (!r.ilpSeconds ? std::string(kInvalid) : wall ? seconds(*r.ilpSeconds) : std::string("-")) + ",";
    out += (wall ? seconds(r.mhInitSeconds) : std::string("-")) + ",";
    out += (r.mhFirstValid ? seconds(*r.mhFirstValid) : std::string("\xe2\x88\x9e")) + ",";  // ∞
    out += (wall && r.window ? seconds(*r.window) : std::string("n/a")) + "\n";
  }
  return out;
}

TraceReport trace_report(const model::Scenario& scenario, const solver::SAParams& params, const RunConfig& config) {
  model::Instance inst(scenario);
  TraceReport rep;
  auto exact = ilp::exact_solve(inst, config.oracleBudget);
  if (exact.status == ilp::ExactStatus::optimal) {
    rep.haveOptimum = true;
    rep.optimum = {0, exact.objective};
  }
  rep.solve = solver::solve(inst, with_run(params, config, config.seed), config.clock());
  const auto& events = rep.solve.trace.events;
  const double initialHard = events.empty() ? 0.0 : static_cast<double>(events.front().score.hard);
  for (const auto& e : events) {
    TraceRow row{e.elapsed, e.score.hard, e.score.soft, 1.0, std::nullopt};
    if (initialHard > 0) row.normalizedValidity = std::clamp(1.0 - static_cast<double>(e.score.hard) / initialHard, 0.0, 1.0);
    if (rep.haveOptimum) row.qualityRatio = solver::quality_ratio(e.score, rep.optimum).value_or(0.0);
    rep.rows.push_back(row);
  }
  return rep;
}

std::string trace_csv(const TraceReport& report) {
  std::string out = std::string("elapsed_s,hard,soft,normalized_validity,") +
                    (report.haveOptimum ? "quality_ratio" : "soft_score") + "\n";
  for (const auto& r : report.rows) {
    out += seconds(r.elapsed) + "," + std::to_string(r.hard) + "," + fixed(r.soft, 3) + "," +
           fixed(r.normalizedValidity, 6) + ",";
    out += (report.haveOptimum ? fixed(*r.qualityRatio, 6) : fixed(r.soft, 3)) + "\n";
  }
  return out;
}

std::string bench_trace(const model::Scenario& scenario, const solver::SAParams& params, const RunConfig& config) {
  return trace_csv(trace_report(scenario, params, config));
}

std::string solve_trace_csv(const solver::SolveTrace& trace) {
  std::string out = "elapsed_s,hard,soft,valid\n";
  for (const auto& e : trace.events) {
    out += seconds(e.elapsed) + "," + std::to_string(e.score.hard) + "," + fixed(e.score.soft, 3) + "," +
           (e.valid ? "1" : "0") + "\n";
  }
  return out;
}

double median_soft(const std::vector<solver::Score>& scores) {
  std::vector<double> v;
  for (const auto& s : scores) v.push_back(s.valid() ? s.soft : std::numeric_limits<double>::infinity());
  return median(v);
}

TuneReport bench_tune(const tuner::TunerSettings& settings, const model::Scenario& scenario, const RunConfig& config,
                      std::size_t productionSeeds) {
  const tuner::SearchSpace space = tuner::solver_search_space();
  orchestrator::EvaluationTarget target;
  target.scenarioInline = model::to_scenario_text(scenario);
  target.timeLimit = settings.perEvalTimeLimit;
  target.virtualClock = config.virtualClock;
  target.evaluationsPerSecond = config.evaluationsPerSecond;

  TuneReport rep;
  if (settings.workers <= 1) {
    orchestrator::DirectEvaluator evaluator(space, target);
    rep.experiment = tuner::run_experiment(settings, space, evaluator);
  } else {
    orchestrator::LocalWorkerPool pool(settings.workers);
    orchestrator::OrchestratedEvaluator evaluator(pool.coordinator(), space, target);
    rep.experiment = tuner::run_experiment(settings, space, evaluator);
  }
  rep.experimentCsv = tuner::report_csv(rep.experiment, space);

  model::Instance inst(scenario);
  solver::SAParams manual = solver::default_params();
  manual.timeLimit = settings.productionTimeLimit;
  // Without any valid measurement the tuned side falls back to the defaults.
  rep.tunedParams = rep.experiment.best
                        ? tuner::to_solver_params(space, *rep.experiment.best, settings.productionTimeLimit, 0)
                        : manual;
  std::vector<solver::Score> manualScores, tunedScores;
  rep.comparisonCsv = "seed,manual_valid,manual_soft,tuned_valid,tuned_soft\n";
  for (std::size_t i = 0; i < productionSeeds; ++i) {
    const std::uint64_t seed = config.seed + i + 1;
    manual.seed = seed;
    rep.tunedParams.seed = seed;
    ProductionRun run{seed, solver::solve(inst, manual, config.clock()).bestScore,
                      solver::solve(inst, rep.tunedParams, config.clock()).bestScore};
    manualScores.push_back(run.manual);
    tunedScores.push_back(run.tuned);
    rep.comparisonCsv += std::to_string(seed) + "," + validity(run.manual) + "," +
                         (run.manual.valid() ? fixed(run.manual.soft, 3) : std::string(kInvalid)) + "," +
                         validity(run.tuned) + "," +
                         (run.tuned.valid() ? fixed(run.tuned.soft, 3) : std::string(kInvalid)) + "\n";
    rep.production.push_back(run);
  }
  auto med = [](double v) { return std::isfinite(v) ? fixed(v, 3) : std::string(kInvalid); };
  rep.comparisonCsv += "# manual_median_soft," + med(median_soft(manualScores)) + "\n";
  rep.comparisonCsv += "# tuned_median_soft," + med(median_soft(tunedScores)) + "\n";
  rep.tunedParams.seed = 0;
  return rep;
}

}  // namespace placetune::bench
