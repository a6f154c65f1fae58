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


#include "placetune/orchestrator/fault_sim.hpp"

#include <map>
#include <optional>
#include <set>

#include "placetune/util/random.hpp"

namespace placetune::orchestrator {

const char* to_string(SimBehaviour b) {
  switch (b) {
    case SimBehaviour::reliable: return "reliable";
    case SimBehaviour::crash: return "crash";
    case SimBehaviour::vanish: return "vanish";
    case SimBehaviour::stall: return "stall";
    case SimBehaviour::duplicate: return "duplicate";
    case SimBehaviour::slow: return "slow";
  }
  return "?";
}

namespace {

struct SimWorker {
  std::string id;
  SimBehaviour behaviour = SimBehaviour::reliable;
  bool connected = true;   // false after crash
  bool responsive = true;  // false while vanished or stalled
  double resumeAt = 0.0;   // stall end
  double nextBeat = 0.0;
  std::optional<std::uint64_t> task;
  double finishAt = 0.0;
  int tasksSeen = 0;
  int faultOnTask = 0;  // task number (1-based) on which the fault triggers
};

}  // namespace

FaultSimReport simulate_faults(std::uint64_t seed, const FaultSimOptions& options) {
  util::Rng rng(seed, 91);
  FaultSimReport report;
  report.seed = seed;

  const std::size_t workerCount = 2 + rng.index(4);
  std::vector<SimWorker> workers(workerCount);
  for (std::size_t i = 0; i < workerCount; ++i) {
    auto& w = workers[i];
    w.id = "sim-" + std::to_string(i);
    if (i > 0) w.behaviour = static_cast<SimBehaviour>(rng.index(6));
    w.faultOnTask = 1 + static_cast<int>(rng.index(3));
    w.nextBeat = rng.uniform(0.0, options.heartbeatInterval);
    report.behaviours.push_back(w.behaviour);
  }

  TaskBoard board(options.board);
  double now = 0.0;
  for (auto& w : workers) board.add_worker(w.id, now);

  std::map<std::uint64_t, int> completions;
  std::set<std::uint64_t> submitted;
  auto violate = [&](std::string text) {
    if (report.violations.size() < 20) report.violations.push_back("t=" + std::to_string(now) + ": " + std::move(text));
  };

  auto collect = [&] {
    for (const auto& r : board.take_completed()) {
      if (!submitted.count(r.taskId)) violate("completion for unsubmitted task " + std::to_string(r.taskId));
      if (++completions[r.taskId] > 1) violate("task " + std::to_string(r.taskId) + " completed twice");
      if (r.status == ResultStatus::failed) ++report.failedByBoard;
    }
  };

  auto check_holders = [&] {
    std::map<std::uint64_t, std::string> holder;
    for (const auto& [id, rec] : board.workers()) {
      if (rec.state == WorkerState::dead) {
        if (rec.task) violate("dead worker " + id + " holds a task");
        continue;
      }
      if (!rec.task) continue;
      auto [it, fresh] = holder.emplace(*rec.task, id);
      if (!fresh) violate("task " + std::to_string(*rec.task) + " held by " + it->second + " and " + id);
    }
  };

  auto send_result = [&](SimWorker& w, std::uint64_t taskId) {
    ResultMsg r;
    r.taskId = taskId;
    r.workerId = w.id;
    r.valid = true;
    r.softScore = static_cast<double>(taskId);
    int copies = w.behaviour == SimBehaviour::duplicate ? 2 : 1;
    for (int c = 0; c < copies; ++c) {
      if (board.on_result(r, now) == ResultDisposition::accepted) ++report.accepted;
    }
  };

  std::uint64_t nextTaskId = 1;
  report.batches = 1 + rng.index(3);
  for (std::size_t batch = 0; batch < report.batches; ++batch) {
    const std::size_t count = 3 + rng.index(15);
    for (std::size_t i = 0; i < count; ++i) {
      TaskMsg t;
      t.taskId = nextTaskId++;
      t.timeLimit = options.timeLimit;
      t.seed = rng.next();
      board.submit(t);
      submitted.insert(t.taskId);
    }
    report.tasks += count;

    while (!board.idle()) {
      if (now > options.horizon) {
        violate("stalled with " + std::to_string(board.outstanding()) + " outstanding tasks");
        break;
      }
      now += options.step;

      for (auto& w : workers) {
        if (!w.connected) continue;
        if (!w.responsive && w.behaviour == SimBehaviour::stall && now >= w.resumeAt) w.responsive = true;
        if (!w.responsive) continue;
        if (now >= w.nextBeat) {
          board.heartbeat(w.id, now);
          w.nextBeat = now + options.heartbeatInterval;
        }
        if (w.task && now >= w.finishAt) {
          const auto taskId = *w.task;
          w.task.reset();
          send_result(w, taskId);
        }
      }

      auto swept = board.sweep(now);
      report.deaths += swept.died.size();
      report.requeues += swept.requeued.size();
      for (const auto& c : swept.cancels) {
        for (auto& w : workers) {
          if (w.id == c.workerId && w.task == c.task.taskId) w.task.reset();
        }
      }

      for (const auto& a : board.dispatch(now)) {
        SimWorker* w = nullptr;
        for (auto& cand : workers) {
          if (cand.id == a.workerId) w = &cand;
        }
        if (!w->connected) {
          board.remove_worker(w->id, now);
          continue;
        }
        if (!w->responsive) continue;  // message lost in silence
        ++w->tasksSeen;
        w->task = a.task.taskId;
        w->finishAt = now + rng.uniform(0.5, 0.8 * options.timeLimit);
        if (w->tasksSeen != w->faultOnTask) continue;
        switch (w->behaviour) {
          case SimBehaviour::crash:
            w->connected = false;
            w->task.reset();
            board.remove_worker(w->id, now);
            break;
          case SimBehaviour::vanish:
            w->responsive = false;
            break;
          case SimBehaviour::stall:
            w->responsive = false;
            w->resumeAt = now + options.board.heartbeatTimeout * rng.uniform(1.2, 2.5);
            w->finishAt = w->resumeAt + rng.uniform(0.0, 2.0);
            break;
          case SimBehaviour::slow:
            w->finishAt = now + options.timeLimit * rng.uniform(1.2, 1.6);
            w->faultOnTask += 2;
            break;
          default:
            break;
        }
      }
      collect();
      check_holders();
    }
    collect();
  }

  for (auto id : submitted) {
    auto it = completions.find(id);
    if (it == completions.end()) violate("task " + std::to_string(id) + " lost");
  }
  report.duplicatesDiscarded = board.duplicates_discarded();
  report.finishedAt = now;
  return report;
}

}  // namespace placetune::orchestrator
