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


// Acceptance checks: one PASS/FAIL line per criterion. Tolerances and seed
// sets are fixed here. `acceptance N...` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "brute_force.hpp"
#include "scripted.hpp"
#include "synthetic.hpp"
#include "placetune/bench/bench.hpp"
#include "placetune/ilp/exact.hpp"
#include "placetune/ilp/ilp_model.hpp"
#include "placetune/model/generator.hpp"
#include "placetune/orchestrator/fault_sim.hpp"
#include "placetune/solver/annealer.hpp"
#include "placetune/solver/moves.hpp"
#include "placetune/tuner/experiment.hpp"
#include "placetune/tuner/repeater.hpp"
#include "placetune/tuner/search_space.hpp"
#include "placetune/util/random.hpp"

namespace fs = std::filesystem;
using namespace placetune;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

// ---- 1 -------------------------------------------------------------------

Verdict search_space_size() {
  const auto n = tuner::solver_search_space().size();
  return {n == 51200, "size " + std::to_string(n) + " (expected 51200)"};
}

// ---- 2 -------------------------------------------------------------------

solver::Allocation random_allocation(const model::Instance& inst, util::Rng& rng) {
  solver::Allocation a;
  for (std::size_t t = 0; t < inst.task_count(); ++t) {
    const auto& task = inst.task(t);
    const auto& own = inst.impls_of_type(task.type);
    solver::ComponentAssignment s{t, task.request, rng.chance(0.85), 0, 0};
    s.impl = (!own.empty() && rng.chance(0.9)) ? own[rng.index(own.size())] : rng.index(inst.impl_count());
    s.hw = rng.index(inst.hw_count());
    a.assignments.push_back(s);
  }
  return a;
}

Verdict score_semantics() {
  std::size_t allocations = 0, moves = 0, validSeen = 0, mismatches = 0;
  const std::size_t rows[] = {0, 1, 2, 3, 4, 7};
  for (std::size_t row : rows) {
    for (std::int64_t seed = 1; seed <= 3; ++seed) {
      model::Instance inst(model::generate_scenario(model::table_family(row, seed)));
      solver::SAParams p = solver::default_params();
      p.subComponentUnassignedFactor = 1 + seed;
      util::Rng rng(static_cast<std::uint64_t>(seed), 400 + row);
      // Independent random allocations, plus the witness-like solver start.
      for (int i = 0; i < 400; ++i) {
        solver::Allocation a = i == 0 ? solver::initial_allocation(inst, static_cast<std::uint64_t>(seed))
                                      : random_allocation(inst, rng);
        const bool valid = solver::check_allocation(a, inst).valid;
        const auto sc = solver::score(a, inst, p);
        if ((sc.hard == 0) != valid) ++mismatches;
        validSeen += valid;
        ++allocations;
      }
      // Move chains: incremental vs full rescoring, validity after every move.
      solver::ScoreKeeper keeper(inst, p, solver::initial_allocation(inst, static_cast<std::uint64_t>(seed)));
      for (int step = 0; step < 1200; ++step) {
        solver::Move m = solver::sample_move(keeper, rng);
        if (m.noop()) continue;
        keeper.apply(m);
        const auto inc = keeper.score();
        const auto full = solver::score(keeper.allocation(), inst, p);
        if (!(inc == full)) ++mismatches;
        if ((inc.hard == 0) != solver::check_allocation(keeper.allocation(), inst).valid) ++mismatches;
        if (rng.chance(0.3)) keeper.undo(m);
        ++moves;
        ++allocations;
      }
    }
  }
  const bool order = solver::better({0, 1000.0}, {1, 10.0}) && !solver::better({1, 10.0}, {0, 1000.0});
  const bool ok = mismatches == 0 && order && allocations >= 10000 && validSeen > 0;
  return {ok, std::to_string(allocations) + " allocations (" + std::to_string(moves) + " via moves, " +
                  std::to_string(validSeen) + " random valid), " + std::to_string(mismatches) +
                  " mismatches, (0,1000) beats (1,10): " + (order ? "yes" : "no")};
}

// ---- 3 -------------------------------------------------------------------

Verdict oracle_equivalence() {
  std::size_t checked = 0, infeasible = 0, failures = 0;
  double largest = 0.0;
  for (std::int64_t seed = 1; checked < 60 && seed < 2000; ++seed) {
    util::Rng pick(static_cast<std::uint64_t>(seed), 3);
    model::GeneratorParams g;
    g.requests = 1 + pick.index(3);
    g.softwareDepth = 1 + pick.index(3);
    g.branching = 1 + pick.index(3);
    g.hardwareCount = 1 + pick.index(4);
    g.seed = seed;
    model::Scenario s;
    try {
      s = model::generate_scenario(g);
    } catch (const model::GeneratorError&) {
      continue;
    }
    if (seed % 3 == 0) {
      for (auto& h : s.hardware) {
        for (auto& c : h.capacity) c *= 0.55;
      }
    }
    model::Instance inst(s);
    const double count = exhaustive::assignment_count(inst);
    if (count > 1e6) continue;
    largest = std::max(largest, count);
    ++checked;
    auto truth = exhaustive::brute_force(inst);
    auto r = ilp::exact_solve(inst);
    if (!truth) {
      ++infeasible;
      if (r.status != ilp::ExactStatus::infeasible) ++failures;
      continue;
    }
    if (r.status != ilp::ExactStatus::optimal || r.objectiveMilli != *truth) {
      ++failures;
      continue;
    }
    auto sc = solver::score(r.to_allocation(inst), inst, solver::default_params());
    if (sc.hard != 0 || model::to_milli(sc.soft) != r.objectiveMilli) ++failures;
  }
  return {checked >= 50 && failures == 0, std::to_string(checked) + " scenarios (" + std::to_string(infeasible) +
                                              " infeasible, largest " +
                                              std::to_string(static_cast<long long>(largest)) +
                                              " assignments), " + std::to_string(failures) + " disagreements"};
}

// ---- 4 -------------------------------------------------------------------

Verdict small_optimality() {
  std::string detail;
  bool ok = true;
  for (std::size_t row = 0; row <= 3; ++row) {
    model::Instance inst(model::generate_scenario(model::table_family(row, 1)));
    auto exact = ilp::exact_solve(inst);
    int hits = 0;
    if (exact.status == ilp::ExactStatus::optimal) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        solver::SAParams p = solver::default_params();
        p.timeLimit = 10.0;
        p.seed = seed;
        auto r = solver::solve(inst, p, solver::ClockSpec::virtual_clock());
        auto q = solver::quality_ratio(r.bestScore, {0, exact.objective});
        if (r.bestScore.valid() && model::to_milli(r.bestScore.soft) == exact.objectiveMilli && q && *q == 1.0) ++hits;
      }
    }
    ok = ok && hits >= 9;
    detail += (detail.empty() ? "" : ", ") + std::string("row ") + std::to_string(row) + " " + std::to_string(hits) +
              "/10";
  }
  return {ok, detail + " at quality 1.0 (need >= 9/10 each)"};
}

// ---- 5 -------------------------------------------------------------------

Verdict scaling_mechanism() {
  bench::RunConfig cfg;
  cfg.virtualClock = false;
  cfg.timeLimit = 0.2;
  cfg.seed = 1;
  const std::vector<std::size_t> hw{64, 128, 256, 512, 1024};
  auto rows = bench::scaling_rows(4, 4, hw, solver::default_params(), cfg, 5);
  bool doubling = true, increasing = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].ilpSize.variables != 2 * rows[i - 1].ilpSize.variables) doubling = false;
    if (!rows[i].window) {
      increasing = false;
    } else if (i > 0 && (!rows[i - 1].window || !(*rows[i].window > *rows[i - 1].window))) {
      increasing = false;
    }
    os << (i ? "; " : "") << rows[i].hwCount << ": vars " << rows[i].ilpSize.variables << " window "
       << (rows[i].window ? std::to_string(*rows[i].window) : std::string("n/a"));
  }
  return {doubling && increasing, std::string("doubling ") + (doubling ? "exact" : "broken") + ", window " +
                                      (increasing ? "strictly increasing" : "not monotone") + " [" + os.str() + "]"};
}

// ---- 6 -------------------------------------------------------------------

Verdict tuner_effectiveness() {
  const tuner::SearchSpace space = tuner::solver_search_space();
  synthetic::GridObjective f(space);
  const double top = f.quantile(0.01);
  int hits = 0;
  std::size_t maxCalls = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    tuner::TunerSettings t = tuner::default_tuner_settings();
    t.seed = seed;
    synthetic::GridEvaluator ev(f);
    auto r = tuner::run_experiment(t, space, ev);
    maxCalls = std::max(maxCalls, ev.calls);
    if (r.best && f.value(*r.best) <= top && ev.calls <= 400) ++hits;
  }

  // Huge-like scenario on the virtual clock.
  tuner::TunerSettings t = tuner::default_tuner_settings();
  t.seed = 1;
  t.productionTimeLimit = 900.0;
  bench::RunConfig cfg;
  cfg.seed = 1;
  auto rep = bench::bench_tune(t, model::generate_scenario(model::table_family(10, 1)), cfg, 5);
  std::vector<solver::Score> manual, tuned;
  for (const auto& run : rep.production) {
    manual.push_back(run.manual);
    tuned.push_back(run.tuned);
  }
  const double m = bench::median_soft(manual), tu = bench::median_soft(tuned);
  const bool ok = hits >= 18 && std::isfinite(tu) && tu <= m;
  std::ostringstream os;
  os << "grid top-1%: " << hits << "/20 seeds (max " << maxCalls << " evaluations); huge-like median soft tuned "
     << tu << " vs default " << m;
  return {ok, os.str()};
}

// ---- 7 -------------------------------------------------------------------

// t(0.975, df) for df = 1..30, from an independent statistics package.
constexpr double kT975[30] = {
    12.706204736432095, 4.302652729696142,  3.182446305284263,  2.7764451051977987, 2.570581835636314,
    2.4469118511449692, 2.3646242515927844, 2.306004135204166,  2.2621571628540993, 2.2281388519649385,
    2.200985160082949,  2.1788128296634177, 2.1603686564610127, 2.1447866879169273, 2.131449545559323,
    2.1199052992210112, 2.1098155778331806, 2.10092204024096,   2.093024054408263,  2.0859634472658364,
    2.079613844727662,  2.0738730679040147, 2.0686576104190406, 2.0638985616280205, 2.059538552753294,
    2.055529438642871,  2.0518305164802833, 2.048407141795244,  2.045229642132703,  2.0422724563012373};

double direct_relative_half_width(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double half = kT975[x.size() - 2] * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return mean == 0.0 ? half : half / std::fabs(mean);
}

Verdict repeater_correctness() {
  std::size_t sequences = 0, disagreements = 0, maxHalfWidthError = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    util::Rng rng(seed, 7);
    const double mean = rng.uniform(10.0, 1000.0);
    const double spread = mean * rng.uniform(0.0, 0.2);
    const double threshold = rng.uniform(0.005, 0.1);
    const std::size_t maxReps = 2 + rng.index(29);
    const auto spec = tuner::RepeaterSpec::student(maxReps, threshold);
    std::vector<double> samples;
    std::size_t expectedStop = 0, actualStop = 0;
    for (std::size_t n = 1; n <= maxReps; ++n) {
      // Sum of uniforms: roughly normal noise.
      double noise = 0.0;
      for (int k = 0; k < 6; ++k) noise += rng.uniform(-1.0, 1.0);
      samples.push_back(mean + spread * noise / 2.0);
      bool expected = n >= maxReps;
      if (n >= 2) {
        const double direct = direct_relative_half_width(samples);
        const double ours = tuner::student_relative_half_width(samples);
        const double err = std::fabs(direct - ours) / std::max(1e-300, std::fabs(direct));
        worst = std::max(worst, err);
        if (err > 1e-9) ++maxHalfWidthError;
        expected = expected || direct <= threshold;
      }
      if (expected && !expectedStop) expectedStop = n;
      if (tuner::repeater_stop(spec, samples) && !actualStop) actualStop = n;
      if (expectedStop) break;
    }
    ++sequences;
    if (expectedStop != actualStop) ++disagreements;
  }
  const auto spec = tuner::RepeaterSpec::student(10, 0.05);
  const bool example = !tuner::repeater_stop(spec, {10.0, 20.0}) &&
                       std::fabs(direct_relative_half_width({10.0, 20.0}) -
                                 tuner::student_relative_half_width({10.0, 20.0})) < 1e-9;
  std::ostringstream os;
  os << sequences << " noisy sequences, " << disagreements << " stop disagreements, " << maxHalfWidthError
     << " half-widths off by > 1e-9 (worst " << worst << "), {10,20} -> " << (example ? "continue" : "WRONG");
  return {disagreements == 0 && maxHalfWidthError == 0 && example, os.str()};
}

// ---- 8 -------------------------------------------------------------------

tuner::SearchSpace grid(std::vector<std::size_t> levels) {
  std::vector<tuner::Parameter> params;
  for (std::size_t d = 0; d < levels.size(); ++d) {
    tuner::Parameter p{"p" + std::to_string(d), {}};
    for (std::size_t v = 0; v < levels[d]; ++v) p.values.push_back(static_cast<double>(v));
    params.push_back(p);
  }
  return tuner::SearchSpace(params);
}

tuner::Sample valid_sample(double soft) {
  tuner::Sample s;
  s.valid = true;
  s.softScore = soft;
  s.seconds = 1.0;
  return s;
}

Verdict stop_conditions() {
  std::vector<std::string> failures;
  {
    // The k-th distinct configuration is the best; all others are worse.
    for (int bestAt : {0, 2, 17}) {
      tuner::SearchSpace s = grid({8, 8, 10, 10, 8});
      std::map<std::uint64_t, int> order;
      scripted::ScriptedEvaluator ev([&](const tuner::EvalRequest& r) {
        const int k = order.emplace(s.rank(r.config), static_cast<int>(order.size())).first->second;
        return valid_sample(k == bestAt ? 1.0 : 100.0 + k);
      });
      tuner::TunerSettings t;
      t.repeater = tuner::RepeaterSpec::quantity(1);
      t.stopConditions = {tuner::StopSpec::improvement(50)};
      auto r = tuner::run_experiment(t, s, ev);
      if (r.log.size() != static_cast<std::size_t>(bestAt + 1 + 50) || r.stopReason != "improvement(50)") {
        failures.push_back("improvement(50) stopped after " + std::to_string(r.log.size()));
      }
    }
  }
  for (auto levels : {std::vector<std::size_t>{3, 4}, std::vector<std::size_t>{5, 2, 3}}) {
    tuner::SearchSpace s = grid(levels);
    scripted::ScriptedEvaluator ev([&](const tuner::EvalRequest& r) { return valid_sample(double(s.rank(r.config))); });
    tuner::TunerSettings t;
    t.repeater = tuner::RepeaterSpec::quantity(1);
    t.stopConditions = {tuner::StopSpec::adaptive(1.0)};
    auto r = tuner::run_experiment(t, s, ev);
    if (r.log.size() != s.size()) failures.push_back("adaptive(1) stopped after " + std::to_string(r.log.size()));
  }
  for (double defaultValue : {3.0, 0.0}) {
    tuner::SearchSpace s = grid({5, 5});
    scripted::ScriptedEvaluator ev(
        [&](const tuner::EvalRequest& r) { return valid_sample(50.0 - double(r.config[0] + r.config[1])); });
    tuner::TunerSettings t;
    t.repeater = tuner::RepeaterSpec::quantity(1);
    t.defaultConfiguration = std::map<std::string, double>{{"p0", defaultValue}, {"p1", defaultValue}};
    t.stopConditions = {tuner::StopSpec::guaranteed()};
    auto r = tuner::run_experiment(t, s, ev);
    const double def = r.log.front().objective;
    bool early = false;
    for (std::size_t i = 0; i + 1 < r.log.size(); ++i) early = early || r.log[i].objective < def;
    if (early || !(r.bestObjective < def)) failures.push_back("guaranteed stopped at the wrong point");
  }
  return {failures.empty(), failures.empty() ? "improvement(50) on the 50th non-improving, adaptive(1) at full "
                                               "coverage, guaranteed only after beating the default"
                                             : failures.front()};
}

// ---- 9 -------------------------------------------------------------------

Verdict orchestrator_resilience() {
  std::size_t violations = 0, runs = 0, duplicates = 0, deaths = 0, tasks = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto rep = orchestrator::simulate_faults(seed);
    ++runs;
    tasks += rep.tasks;
    duplicates += rep.duplicatesDiscarded;
    deaths += rep.deaths;
    if (rep.accepted + rep.failedByBoard != rep.tasks) rep.violations.push_back("acceptance count mismatch");
    if (!rep.violations.empty() && first.empty()) first = "seed " + std::to_string(seed) + ": " + rep.violations[0];
    violations += rep.violations.size();
  }
  std::ostringstream os;
  os << runs << " runs, " << tasks << " tasks, " << deaths << " worker deaths, " << duplicates
     << " duplicates discarded, " << violations << " violations";
  if (!first.empty()) os << " (" << first << ")";
  return {violations == 0, os.str()};
}

// ---- 10 ------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / ("placetune-accept-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string cli = PLACETUNE_CLI;
  struct Job {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Job> jobs = {
      {"table", "table --virtual-clock --seed 3 --rows 0-12", {"table.csv"}},
      {"trace", "trace --virtual-clock --seed 3 --row 3", {"trace.csv"}},
      {"tune", "tune --virtual-clock --seed 3 --row 1 --eval-limit 1 --production-limit 20 --production-seeds 2",
       {"tune_report.csv", "tune_comparison.csv"}},
  };
  std::vector<std::string> diffs;
  for (const auto& job : jobs) {
    for (int run = 0; run < 2; ++run) {
      const fs::path out = root / (job.name + std::to_string(run));
      const std::string cmd = "\"" + cli + "\" " + job.args + " --out \"" + out.string() + "\" 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) diffs.push_back(job.name + " run " + std::to_string(run) + " failed");
    }
    for (const auto& f : job.files) {
      const std::string a = slurp(root / (job.name + "0") / f), b = slurp(root / (job.name + "1") / f);
      if (a.empty() || a != b) diffs.push_back(job.name + "/" + f);
    }
  }
  fs::remove_all(root);
  std::string detail = "table, trace, tune CSVs ";
  if (diffs.empty()) return {true, detail + "byte-identical across two runs"};
  for (const auto& d : diffs) detail += d + " ";
  return {false, detail + "differ or missing"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"search-space size", search_space_size},
      {"score semantics", score_semantics},
      {"oracle equivalence", oracle_equivalence},
      {"solver optimality at small scale", small_optimality},
      {"scaling mechanism", scaling_mechanism},
      {"tuner effectiveness", tuner_effectiveness},
      {"repeater correctness", repeater_correctness},
      {"stop conditions", stop_conditions},
      {"orchestrator resilience", orchestrator_resilience},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %-34s %s  %s (%.1f s)\n", id, criteria[i].first, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
