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


// placetune command line: scenario generation, solving, ILP export,
// benchmarks, tuning and the distributed main node / worker pair.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "placetune/bench/bench.hpp"
#include "placetune/ilp/ilp_model.hpp"
#include "placetune/model/generator.hpp"
#include "placetune/model/instance.hpp"
#include "placetune/model/scenario_io.hpp"
#include "placetune/orchestrator/coordinator.hpp"
#include "placetune/orchestrator/transport.hpp"
#include "placetune/orchestrator/worker.hpp"
#include "placetune/solver/annealer.hpp"
#include "placetune/tuner/search_space.hpp"

namespace fs = std::filesystem;
using namespace placetune;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  bool virtualClock = false;
  double evaluationsPerSecond = 20000.0;
};

struct ScenarioArg {
  std::string file;
  int row = -1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output directory (stdout when omitted)");
  cmd->add_flag("--virtual-clock", c.virtualClock, "Step-counted time instead of wall time");
  cmd->add_option("--evaluations-per-second", c.evaluationsPerSecond, "Virtual clock rate");
}

void add_scenario(CLI::App* cmd, ScenarioArg& s) {
  cmd->add_option("--scenario", s.file, "Scenario file");
  cmd->add_option("--row", s.row, "Generated table family row (0-12) instead of a file");
}

model::Scenario load(const ScenarioArg& s, std::uint64_t seed) {
  if (!s.file.empty()) return model::load_scenario(s.file);
  if (s.row >= 0) return model::generate_scenario(model::table_family(static_cast<std::size_t>(s.row),
                                                                      static_cast<std::int64_t>(seed)));
  throw UsageError("one of --scenario or --row is required");
}

/// Writes to <out>/<name>, or stdout without --out.
void emit(const Common& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(path.string() + ": cannot write");
  f << text;
  if (!f) throw std::runtime_error(path.string() + ": write failed");
  std::cerr << "wrote " << path.string() << "\n";
}

solver::SAParams parse_params(const std::vector<std::string>& kvs) {
  solver::SAParams p = solver::default_params();
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("expected K=V, got '" + kv + "'");
    const std::string k = kv.substr(0, eq);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw UsageError("not a number in '" + kv + "'");
    }
    if (k == "subComponentUnassignedFactor") {
      p.subComponentUnassignedFactor = static_cast<std::int64_t>(v);
    } else if (k == "softwareComponentUnassignedFactor") {
      p.softwareComponentUnassignedFactor = static_cast<std::int64_t>(v);
    } else if (k == "hardScoreStartingTemperature") {
      p.hardScoreStartingTemperature = v;
    } else if (k == "softScoreStartingTemperature") {
      p.softScoreStartingTemperature = v;
    } else if (k == "neighborhoodSize") {
      p.neighborhoodSize = static_cast<std::int64_t>(v);
    } else {
      throw UsageError("unknown parameter '" + k + "'");
    }
  }
  return p;
}

std::vector<std::size_t> parse_rows(const std::string& spec) {
  std::vector<std::size_t> rows;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        rows.push_back(std::stoul(part));
      } else {
        for (std::size_t r = std::stoul(part.substr(0, dash)); r <= std::stoul(part.substr(dash + 1)); ++r) rows.push_back(r);
      }
    } catch (const std::exception&) {
      throw UsageError("bad list '" + spec + "'");
    }
  }
  return rows;
}

bench::RunConfig run_config(const Common& c, double timeLimit) {
  bench::RunConfig cfg;
  cfg.timeLimit = timeLimit;
  cfg.virtualClock = c.virtualClock;
  cfg.evaluationsPerSecond = c.evaluationsPerSecond;
  cfg.seed = c.seed;
  return cfg;
}

std::string params_json(const solver::SAParams& p) {
  nlohmann::json j = {{"subComponentUnassignedFactor", p.subComponentUnassignedFactor},
                      {"softwareComponentUnassignedFactor", p.softwareComponentUnassignedFactor},
                      {"hardScoreStartingTemperature", p.hardScoreStartingTemperature},
                      {"softScoreStartingTemperature", p.softScoreStartingTemperature},
                      {"neighborhoodSize", p.neighborhoodSize}};
  return j.dump(2) + "\n";
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& s) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos) throw UsageError("expected HOST:PORT, got '" + s + "'");
  try {
    return {s.substr(0, colon), static_cast<std::uint16_t>(std::stoul(s.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw UsageError("bad port in '" + s + "'");
  }
}

void fail_line(const std::string& command, const std::string& kind, const std::string& message) {
  nlohmann::json j = {{"error", kind}, {"command", command}, {"message", message}};
  std::cerr << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"placetune: annealing solver, ILP oracle and parameter tuner"};
  app.require_subcommand(1);

  // gen
  Common genC;
  std::string genFamily = "table";
  int genRow = 0;
  std::size_t genRequests = 4, genChain = 4, genHw = 64, genDepth = 1, genBranching = 1;
  double genScale = 1.0;
  std::string genName = "scenario.json";
  auto* gen = app.add_subcommand("gen", "Generate a scenario");
  add_common(gen, genC);
  gen->add_option("--family", genFamily, "table | chain | custom")->check(CLI::IsMember({"table", "chain", "custom"}));
  gen->add_option("--row", genRow, "Table family row (0-12)");
  gen->add_option("--requests", genRequests, "Requests (chain, custom)");
  gen->add_option("--chain-length", genChain, "Chain length (chain)");
  gen->add_option("--hw", genHw, "Hardware count (chain)");
  gen->add_option("--hardware-scale", genScale, "Hardware scale (custom)");
  gen->add_option("--depth", genDepth, "Software depth (custom)");
  gen->add_option("--branching", genBranching, "Implementations per type (custom)");
  gen->add_option("--name", genName, "Output file name inside --out");

  // solve
  Common solveC;
  ScenarioArg solveS;
  std::vector<std::string> solveParams;
  double solveLimit = 10.0;
  std::string solveTrace;
  auto* solve = app.add_subcommand("solve", "Run the annealer on one scenario");
  add_common(solve, solveC);
  add_scenario(solve, solveS);
  solve->add_option("--params", solveParams, "K=V solver parameters");
  solve->add_option("--time-limit", solveLimit, "Seconds");
  solve->add_option("--trace", solveTrace, "Write elapsed_s,hard,soft,valid to this file");

  // ilp-gen
  Common ilpC;
  ScenarioArg ilpS;
  std::string ilpName = "model.lp";
  auto* ilpGen = app.add_subcommand("ilp-gen", "Export the binary program as an LP file");
  add_common(ilpGen, ilpC);
  add_scenario(ilpGen, ilpS);
  ilpGen->add_option("--name", ilpName, "Output file name inside --out");

  // trace
  Common traceC;
  ScenarioArg traceS;
  std::vector<std::string> traceParams;
  double traceLimit = 10.0;
  auto* trace = app.add_subcommand("trace", "Quality-over-time trace against the oracle");
  add_common(trace, traceC);
  add_scenario(trace, traceS);
  trace->add_option("--params", traceParams, "K=V solver parameters");
  trace->add_option("--time-limit", traceLimit, "Seconds");

  // table
  Common tableC;
  std::string tableRows = "0-12";
  std::vector<std::string> tableTuned;
  double tableLimit = 10.0;
  std::size_t tableParallel = 1;
  std::int64_t tableBudget = ilp::kDefaultNodeBudget;
  auto* table = app.add_subcommand("table", "Manual vs tuned comparison over the table families");
  add_common(table, tableC);
  table->add_option("--rows", tableRows, "Rows, e.g. 0-4,7");
  table->add_option("--tuned", tableTuned, "K=V tuned parameters (default: the manual ones)");
  table->add_option("--time-limit", tableLimit, "Seconds per solver run");
  table->add_option("--parallel", tableParallel, "Run solver jobs on this many local workers");
  table->add_option("--oracle-budget", tableBudget, "Branch-and-bound node budget");

  // scaling
  Common scalingC;
  std::string scalingHw = "64,128,256,512,1024";
  std::size_t scalingRequests = 4, scalingChain = 4, scalingRepeats = 3;
  double scalingLimit = 5.0;
  std::vector<std::string> scalingParams;
  auto* scaling = app.add_subcommand("scaling", "First-valid window sweep over hardware counts");
  add_common(scaling, scalingC);
  scaling->add_option("--hw", scalingHw, "Hardware counts, comma separated");
  scaling->add_option("--requests", scalingRequests, "Requests");
  scaling->add_option("--chain-length", scalingChain, "Chain length");
  scaling->add_option("--repeats", scalingRepeats, "Runs per point (medians are reported)");
  scaling->add_option("--time-limit", scalingLimit, "Seconds per solver run");
  scaling->add_option("--params", scalingParams, "K=V solver parameters");

  // tune
  Common tuneC;
  ScenarioArg tuneS;
  std::string tuneSettings;
  std::size_t tuneSeeds = 5;
  std::optional<double> tuneProduction, tunePerEval;
  auto* tune = app.add_subcommand("tune", "Tune the annealer and compare with the manual configuration");
  add_common(tune, tuneC);
  add_scenario(tune, tuneS);
  tune->add_option("--settings", tuneSettings, "Tuner settings file (JSON)");
  tune->add_option("--production-seeds", tuneSeeds, "Seeds for the side-by-side comparison");
  tune->add_option("--production-limit", tuneProduction, "Override the production time limit");
  tune->add_option("--eval-limit", tunePerEval, "Override the per-evaluation time limit");

  // worker
  std::string workerEndpoint, workerId;
  double workerBeat = 2.0;
  auto* worker = app.add_subcommand("worker", "Serve solver tasks for a main node");
  worker->add_option("--connect", workerEndpoint, "HOST:PORT of the main node")->required();
  worker->add_option("--id", workerId, "Worker id (default: worker-<pid>)");
  worker->add_option("--heartbeat", workerBeat, "Heartbeat interval, seconds");

  // main-node
  Common mainC;
  ScenarioArg mainS;
  std::uint16_t mainPort = 0;
  std::string mainSettings;
  std::size_t mainMinWorkers = 1;
  double mainWait = 60.0;
  auto* mainNode = app.add_subcommand("main-node", "Run a tuning experiment on remote workers");
  add_common(mainNode, mainC);
  add_scenario(mainNode, mainS);
  mainNode->add_option("--listen", mainPort, "TCP port")->required();
  mainNode->add_option("--experiment", mainSettings, "Tuner settings file (JSON)")->required();
  mainNode->add_option("--min-workers", mainMinWorkers, "Workers to wait for before starting");
  mainNode->add_option("--wait", mainWait, "Seconds to wait for workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const std::string sub = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    fail_line(sub, "usage", e.what());
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*gen) {
      model::GeneratorParams p;
      if (genFamily == "table") {
        p = model::table_family(static_cast<std::size_t>(genRow), static_cast<std::int64_t>(genC.seed));
      } else if (genFamily == "chain") {
        p = model::chain_family(genRequests, genChain, genHw, static_cast<std::int64_t>(genC.seed));
      } else {
        p.requests = genRequests;
        p.hardwareScale = genScale;
        p.softwareDepth = genDepth;
        p.branching = genBranching;
        p.seed = static_cast<std::int64_t>(genC.seed);
      }
      emit(genC, genName, model::to_scenario_text(model::generate_scenario(p)));
    } else if (*solve) {
      model::Instance inst(load(solveS, solveC.seed));
      solver::SAParams p = parse_params(solveParams);
      p.timeLimit = solveLimit;
      p.seed = solveC.seed;
      auto res = solver::solve(inst, p, run_config(solveC, solveLimit).clock());
      nlohmann::json j = {{"valid", res.bestScore.valid()},
                          {"hard", res.bestScore.hard},
                          {"soft", res.bestScore.soft},
                          {"steps", res.trace.steps},
                          {"candidateScorings", res.trace.candidateScorings},
                          {"elapsed", res.trace.elapsed}};
      j["firstValidAt"] = res.trace.firstValidAt ? nlohmann::json(*res.trace.firstValidAt) : nlohmann::json();
      j["lastImprovementAt"] =
          res.trace.lastImprovementAt ? nlohmann::json(*res.trace.lastImprovementAt) : nlohmann::json();
      if (!solveC.virtualClock) j["initSeconds"] = res.trace.initSeconds;
      emit(solveC, "solve.json", j.dump(2) + "\n");
      if (!solveTrace.empty()) {
        std::ofstream f(solveTrace, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(solveTrace + ": cannot write");
        f << bench::solve_trace_csv(res.trace);
      }
    } else if (*ilpGen) {
      auto built = ilp::build_ilp(load(ilpS, ilpC.seed));
      emit(ilpC, ilpName, ilp::to_lp_text(built.model));
      std::cerr << "variables " << built.model.variable_count() << ", rows " << built.model.row_count()
                << ", nonzeros " << built.model.nonzero_count() << "\n";
    } else if (*trace) {
      emit(traceC, "trace.csv",
           bench::bench_trace(load(traceS, traceC.seed), parse_params(traceParams), run_config(traceC, traceLimit)));
    } else if (*table) {
      auto cfg = run_config(tableC, tableLimit);
      cfg.workers = tableParallel;
      cfg.oracleBudget = tableBudget;
      auto scenarios = bench::table_scenarios(parse_rows(tableRows), static_cast<std::int64_t>(tableC.seed));
      const solver::SAParams manual = solver::default_params();
      const solver::SAParams tuned = tableTuned.empty() ? manual : parse_params(tableTuned);
      emit(tableC, "table.csv", bench::bench_table(scenarios, manual, tuned, cfg));
    } else if (*scaling) {
      auto rows = bench::scaling_rows(scalingRequests, scalingChain, parse_rows(scalingHw), parse_params(scalingParams),
                                      run_config(scalingC, scalingLimit), scalingRepeats);
      emit(scalingC, "scaling.csv", bench::scaling_csv(rows, run_config(scalingC, scalingLimit)));
    } else if (*tune) {
      tuner::TunerSettings settings =
          tuneSettings.empty() ? tuner::default_tuner_settings() : tuner::load_settings(tuneSettings);
      settings.seed = tuneC.seed;
      if (tuneProduction) settings.productionTimeLimit = *tuneProduction;
      if (tunePerEval) settings.perEvalTimeLimit = *tunePerEval;
      auto rep = bench::bench_tune(settings, load(tuneS, tuneC.seed), run_config(tuneC, settings.perEvalTimeLimit),
                                   tuneSeeds);
      emit(tuneC, "tune_report.csv", rep.experimentCsv);
      emit(tuneC, "tune_comparison.csv", rep.comparisonCsv);
      emit(tuneC, "tuned_params.json", params_json(rep.tunedParams));
    } else if (*worker) {
      auto [host, port] = parse_endpoint(workerEndpoint);
      orchestrator::WorkerOptions opts;
      opts.workerId = workerId.empty() ? "worker-" + std::to_string(::getpid()) : workerId;
      opts.heartbeatInterval = workerBeat;
      auto channel = orchestrator::connect_to(host, port);
      orchestrator::serve_worker(*channel, opts);
    } else if (*mainNode) {
      tuner::TunerSettings settings = tuner::load_settings(mainSettings);
      settings.seed = mainC.seed;
      const model::Scenario scenario = load(mainS, mainC.seed);
      orchestrator::Listener listener(mainPort);
      std::cerr << "listening on " << listener.port() << "\n";
      orchestrator::WorkerHub hub;
      orchestrator::Coordinator coordinator(hub);
      std::atomic<bool> accepting{true};
      std::thread acceptor([&] {
        while (accepting) {
          if (auto conn = listener.accept(0.25)) hub.attach(conn);
        }
      });
      const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(mainWait);
      while (coordinator.live_workers() < mainMinWorkers && std::chrono::steady_clock::now() < deadline) {
        coordinator.pump(0.05);
      }
      if (coordinator.live_workers() < mainMinWorkers) {
        accepting = false;
        acceptor.join();
        throw std::runtime_error("only " + std::to_string(coordinator.live_workers()) + " workers connected");
      }
      const tuner::SearchSpace space = tuner::solver_search_space();
      orchestrator::EvaluationTarget target;
      target.scenarioInline = model::to_scenario_text(scenario);
      target.timeLimit = settings.perEvalTimeLimit;
      target.virtualClock = mainC.virtualClock;
      target.evaluationsPerSecond = mainC.evaluationsPerSecond;
      orchestrator::OrchestratedEvaluator evaluator(coordinator, space, target);
      auto result = tuner::run_experiment(settings, space, evaluator);
      hub.broadcast_bye();
      accepting = false;
      acceptor.join();
      hub.shutdown();
      emit(mainC, "tune_report.csv", tuner::report_csv(result, space));
    }
  } catch (const UsageError& e) {
    fail_line(command, "usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    fail_line(command, "runtime", e.what());
    return 1;
  }
  return 0;
}
