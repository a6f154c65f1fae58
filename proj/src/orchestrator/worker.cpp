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


#include "placetune/orchestrator/worker.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <thread>

#include "placetune/model/scenario_io.hpp"
#include "placetune/solver/annealer.hpp"

namespace placetune::orchestrator {

std::shared_ptr<const model::Instance> ScenarioCache::get(const TaskMsg& task) {
  const std::string key = task.scenarioInline.empty() ? "path:" + task.scenarioPath : "inline:" + task.scenarioInline;
  if (instance_ && key == key_) return instance_;
  model::Scenario s = task.scenarioInline.empty() ? model::load_scenario(task.scenarioPath)
                                                  : model::parse_scenario_text(task.scenarioInline);
  instance_ = std::make_shared<const model::Instance>(std::move(s));
  key_ = key;
  return instance_;
}

namespace {

double config_value(const TaskMsg& t, const char* name, double fallback) {
  auto it = t.configuration.find(name);
  return it == t.configuration.end() ? fallback : it->second;
}

}  // namespace

ResultMsg worker_run(const TaskMsg& task, const std::string& workerId, ScenarioCache* cache) {
  const auto start = std::chrono::steady_clock::now();
  ResultMsg r;
  r.taskId = task.taskId;
  r.workerId = workerId;
  try {
    ScenarioCache local;
    auto inst = (cache ? cache : &local)->get(task);
    solver::SAParams p = solver::default_params();
    p.subComponentUnassignedFactor = static_cast<std::int64_t>(
        config_value(task, "subComponentUnassignedFactor", static_cast<double>(p.subComponentUnassignedFactor)));
    p.softwareComponentUnassignedFactor = static_cast<std::int64_t>(config_value(
        task, "softwareComponentUnassignedFactor", static_cast<double>(p.softwareComponentUnassignedFactor)));
    p.hardScoreStartingTemperature = config_value(task, "hardScoreStartingTemperature", p.hardScoreStartingTemperature);
    p.softScoreStartingTemperature = config_value(task, "softScoreStartingTemperature", p.softScoreStartingTemperature);
    p.neighborhoodSize =
        static_cast<std::int64_t>(config_value(task, "neighborhoodSize", static_cast<double>(p.neighborhoodSize)));
    p.timeLimit = task.timeLimit;
    p.seed = task.seed;
    auto clock = task.virtualClock ? solver::ClockSpec::virtual_clock(task.evaluationsPerSecond)
                                   : solver::ClockSpec::wall();
    auto res = solver::solve(*inst, p, clock);
    r.status = ResultStatus::ok;
    r.valid = res.bestScore.valid();
    r.softScore = res.bestScore.soft;
    r.hardScore = res.bestScore.hard;
    r.firstValidAt = res.trace.firstValidAt;
    r.lastImprovementAt = res.trace.lastImprovementAt;
    r.solverSeconds = res.trace.elapsed;
  } catch (const std::exception& e) {
    r.status = ResultStatus::failed;
    r.error = e.what();
  }
  r.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void serve_worker(LineChannel& channel, const WorkerOptions& options) {
  std::atomic<bool> quiet{false};
  std::atomic<bool> stop{false};
  std::mutex m;
  std::condition_variable cv;

  channel.write_line(encode(HelloMsg{options.workerId}));
  std::thread beat([&] {
    std::unique_lock lock(m);
    while (!stop) {
      cv.wait_for(lock, std::chrono::duration<double>(options.heartbeatInterval), [&] { return stop.load(); });
      if (stop) break;
      if (!quiet) channel.write_line(encode(HeartbeatMsg{options.workerId}));
    }
  });

  ScenarioCache cache;
  int finished = 0;
  int received = 0;
  std::string line;
  for (;;) {
    ReadStatus st = channel.read_line(line, 0.25);
    if (st == ReadStatus::closed) break;
    if (st == ReadStatus::timeout || quiet) continue;
    Message msg;
    try {
      msg = decode(line);
    } catch (const ProtocolError&) {
      continue;
    }
    if (std::holds_alternative<ByeMsg>(msg)) break;
    const auto* task = std::get_if<TaskMsg>(&msg);
    if (!task) continue;
    ++received;
    if (options.faults.crashOnTask >= 0 && received >= options.faults.crashOnTask) break;
    ResultMsg r = worker_run(*task, options.workerId, &cache);
    channel.write_line(encode(r));
    if (options.faults.duplicateResults) channel.write_line(encode(r));
    ++finished;
    if (options.faults.silentAfterTasks >= 0 && finished >= options.faults.silentAfterTasks) quiet = true;
    if (options.faults.dropAfterTasks >= 0 && finished >= options.faults.dropAfterTasks) break;
  }
  {
    std::lock_guard lock(m);
    stop = true;
  }
  cv.notify_all();
  beat.join();
  channel.close();
}

}  // namespace placetune::orchestrator
