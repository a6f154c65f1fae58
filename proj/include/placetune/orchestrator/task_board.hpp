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


#ifndef PLACETUNE_ORCHESTRATOR_TASK_BOARD_HPP
#define PLACETUNE_ORCHESTRATOR_TASK_BOARD_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "placetune/orchestrator/protocol.hpp"

namespace placetune::orchestrator {

struct BoardConfig {
  double heartbeatTimeout = 10.0;  // seconds of silence before a worker is dead
  double graceFraction = 0.1;      // overrun allowance relative to the task time limit
  double minGrace = 0.5;           // lower bound on the overrun allowance, seconds
  int maxAttempts = 3;             // dispatches per task before it is failed
};

enum class WorkerState { idle, busy, dead };

struct WorkerRecord {
  std::string workerId;
  double lastHeartbeatAt = 0.0;
  WorkerState state = WorkerState::idle;
  std::optional<std::uint64_t> task;
};

struct Assignment {
  std::string workerId;
  TaskMsg task;
};

enum class ResultDisposition { accepted, duplicate, unknown };

struct BoardEvent {
  double at;
  std::string text;
};

/// Main-node bookkeeping. Pure state machine: callers pass the current
/// time, so it can be driven by a simulated clock.
class TaskBoard {
 public:
  explicit TaskBoard(BoardConfig config = {}) : config_(config) {}

  void add_worker(const std::string& workerId, double now);
  void heartbeat(const std::string& workerId, double now);
  /// Orderly departure; a held task is requeued.
  void remove_worker(const std::string& workerId, double now);

  /// Queues a task; taskIds must be unique.
  void submit(const TaskMsg& task);

  /// FIFO assignment of queued tasks to idle live workers.
  std::vector<Assignment> dispatch(double now);

  /// First result for an outstanding task is accepted; later ones are
  /// duplicates. Results from workers never given the task are unknown.
  ResultDisposition on_result(const ResultMsg& result, double now);

  struct SweepOutcome {
    std::vector<std::string> died;
    std::vector<std::uint64_t> requeued;
    std::vector<std::uint64_t> failed;   // overrun or out of attempts
    std::vector<Assignment> cancels;     // overrun tasks to cancel on their worker
  };
  /// Declares silent workers dead and fails overrunning tasks.
  SweepOutcome sweep(double now);

  /// Accepted results (including synthesized failures) in completion order.
  std::vector<ResultMsg> take_completed();

  bool idle() const { return outstanding_.empty(); }
  std::size_t queued() const { return queue_.size(); }
  std::size_t outstanding() const { return outstanding_.size(); }
  std::size_t live_workers() const;
  const std::map<std::string, WorkerRecord>& workers() const { return workers_; }
  const std::vector<BoardEvent>& events() const { return events_; }
  std::size_t duplicates_discarded() const { return duplicates_; }
  /// Number of times a task was handed to a worker.
  int attempts(std::uint64_t taskId) const;

 private:
  struct TaskRecord {
    TaskMsg msg;
    int attempts = 0;
    std::optional<std::string> holder;
    double startedAt = 0.0;
    std::set<std::string> everAssigned;
  };

  void release_worker(WorkerRecord& w);
  void requeue_or_fail(std::uint64_t taskId, double now, SweepOutcome* out);
  void complete(const ResultMsg& result);
  void log(double at, std::string text) { events_.push_back({at, std::move(text)}); }

  BoardConfig config_;
  std::map<std::string, WorkerRecord> workers_;
  std::vector<std::string> workerOrder_;
  std::deque<std::uint64_t> queue_;
  std::map<std::uint64_t, TaskRecord> outstanding_;
  std::set<std::uint64_t> done_;
  std::vector<ResultMsg> completed_;
  std::vector<BoardEvent> events_;
  std::size_t duplicates_ = 0;
  std::map<std::uint64_t, int> attemptLog_;
};

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_TASK_BOARD_HPP
