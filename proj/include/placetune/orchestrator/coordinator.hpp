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


#ifndef PLACETUNE_ORCHESTRATOR_COORDINATOR_HPP
#define PLACETUNE_ORCHESTRATOR_COORDINATOR_HPP

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "placetune/orchestrator/protocol.hpp"
#include "placetune/orchestrator/task_board.hpp"
#include "placetune/orchestrator/transport.hpp"
#include "placetune/orchestrator/worker.hpp"
#include "placetune/tuner/experiment.hpp"

namespace placetune::orchestrator {

/// Main-node side of all worker connections. One reader thread per
/// connection feeds a single inbox consumed by the coordinator.
class WorkerHub {
 public:
  WorkerHub() = default;
  ~WorkerHub();
  WorkerHub(const WorkerHub&) = delete;
  WorkerHub& operator=(const WorkerHub&) = delete;

  struct Inbound {
    std::size_t connection;
    std::optional<Message> message;  // empty: connection closed
  };

  void attach(std::shared_ptr<LineChannel> channel);
  std::optional<Inbound> poll(double timeoutSeconds);
  /// Binds a worker id to the connection its hello arrived on.
  void bind(const std::string& workerId, std::size_t connection);
  bool send(const std::string& workerId, const Message& message);
  void broadcast_bye();
  void shutdown();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Inbound> inbox_;
  std::vector<std::shared_ptr<LineChannel>> channels_;
  std::vector<std::thread> readers_;
  std::map<std::string, std::size_t> byWorker_;
  std::atomic<bool> stopping_{false};
};

struct CoordinatorOptions {
  BoardConfig board;
  double pollInterval = 0.02;
  double noWorkerTimeout = 60.0;  // fail remaining tasks after this long without live workers
};

/// Runs batches of tasks to completion over a hub.
class Coordinator {
 public:
  Coordinator(WorkerHub& hub, CoordinatorOptions options = {});

  /// Blocks until every task has exactly one accepted result; returns them
  /// in submission order.
  std::vector<ResultMsg> run(const std::vector<TaskMsg>& tasks);

  std::uint64_t next_task_id() { return nextTaskId_++; }
  const TaskBoard& board() const { return board_; }
  std::size_t live_workers() const { return board_.live_workers(); }
  /// Processes inbound traffic for a while without submitting anything.
  void pump(double seconds);

 private:
  double now() const;
  void handle(const WorkerHub::Inbound& in);

  WorkerHub& hub_;
  CoordinatorOptions options_;
  TaskBoard board_;
  std::map<std::size_t, std::string> connectionWorker_;
  std::uint64_t nextTaskId_ = 1;
  std::chrono::steady_clock::time_point start_;
};

/// In-process worker service: N worker threads on local channels.
class LocalWorkerPool {
 public:
  explicit LocalWorkerPool(std::size_t workers, CoordinatorOptions options = {},
                           std::vector<FaultPlan> faults = {}, double heartbeatInterval = 2.0);
  ~LocalWorkerPool();

  Coordinator& coordinator() { return coordinator_; }
  /// Adds one more worker thread.
  void add_worker(const FaultPlan& faults = {});

 private:
  WorkerHub hub_;
  Coordinator coordinator_;
  std::vector<std::thread> threads_;
  double heartbeatInterval_;
  std::size_t counter_ = 0;
};

struct EvaluationTarget {
  std::string scenarioPath;
  std::string scenarioInline;
  double timeLimit = 10.0;
  bool virtualClock = true;
  double evaluationsPerSecond = 20000.0;
};

/// Task for one tuner repetition.
TaskMsg make_task(std::uint64_t taskId, const EvaluationTarget& target, const tuner::SearchSpace& space,
                  const tuner::EvalRequest& request);
/// Sample the tuner sees for a worker result.
tuner::Sample to_sample(const ResultMsg& result, const EvaluationTarget& target);

/// Runs every repetition in-process, in request order. Same samples as the
/// orchestrated path under the virtual clock.
class DirectEvaluator : public tuner::Evaluator {
 public:
  DirectEvaluator(const tuner::SearchSpace& space, EvaluationTarget target);
  std::vector<tuner::Sample> evaluate_batch(const std::vector<tuner::EvalRequest>& requests) override;

 private:
  const tuner::SearchSpace& space_;
  EvaluationTarget target_;
  ScenarioCache cache_;
  std::uint64_t nextTaskId_ = 1;
};

/// Tuner evaluator that ships every repetition to workers as a task.
/// Sample seconds are the solver's clock reading (virtual or wall).
class OrchestratedEvaluator : public tuner::Evaluator {
 public:
  OrchestratedEvaluator(Coordinator& coordinator, const tuner::SearchSpace& space, EvaluationTarget target);
  std::vector<tuner::Sample> evaluate_batch(const std::vector<tuner::EvalRequest>& requests) override;

 private:
  Coordinator& coordinator_;
  const tuner::SearchSpace& space_;
  EvaluationTarget target_;
};

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_COORDINATOR_HPP
