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


#include "placetune/orchestrator/coordinator.hpp"

#include <chrono>

namespace placetune::orchestrator {

WorkerHub::~WorkerHub() { shutdown(); }

void WorkerHub::attach(std::shared_ptr<LineChannel> channel) {
  std::lock_guard lock(mutex_);
  const std::size_t id = channels_.size();
  channels_.push_back(channel);
  readers_.emplace_back([this, channel, id] {
    std::string line;
    for (;;) {
      ReadStatus st = channel->read_line(line, 0.25);
      if (st == ReadStatus::timeout) {
        if (stopping_) break;
        continue;
      }
      Inbound in{id, std::nullopt};
      if (st == ReadStatus::line) {
        try {
          in.message = decode(line);
        } catch (const ProtocolError&) {
          continue;
        }
      }
      {
        std::lock_guard lock(mutex_);
        inbox_.push_back(std::move(in));
      }
      cv_.notify_one();
      if (st == ReadStatus::closed) break;
    }
  });
}

std::optional<WorkerHub::Inbound> WorkerHub::poll(double timeoutSeconds) {
  std::unique_lock lock(mutex_);
  if (!cv_.wait_for(lock, std::chrono::duration<double>(timeoutSeconds), [&] { return !inbox_.empty(); })) {
    return std::nullopt;
  }
  Inbound in = std::move(inbox_.front());
  inbox_.pop_front();
  return in;
}

void WorkerHub::bind(const std::string& workerId, std::size_t connection) {
  std::lock_guard lock(mutex_);
  byWorker_[workerId] = connection;
}

bool WorkerHub::send(const std::string& workerId, const Message& message) {
  std::shared_ptr<LineChannel> ch;
  {
    std::lock_guard lock(mutex_);
    auto it = byWorker_.find(workerId);
    if (it == byWorker_.end()) return false;
    ch = channels_[it->second];
  }
  return ch->write_line(encode(message));
}

void WorkerHub::broadcast_bye() {
  std::vector<std::shared_ptr<LineChannel>> chans;
  {
    std::lock_guard lock(mutex_);
    chans = channels_;
  }
  for (auto& c : chans) c->write_line(encode(ByeMsg{"main", "shutdown"}));
}

void WorkerHub::shutdown() {
  stopping_ = true;
  std::vector<std::shared_ptr<LineChannel>> chans;
  std::vector<std::thread> readers;
  {
    std::lock_guard lock(mutex_);
    chans = channels_;
    readers.swap(readers_);
  }
  for (auto& c : chans) c->close();
  for (auto& t : readers) {
    if (t.joinable()) t.join();
  }
}

Coordinator::Coordinator(WorkerHub& hub, CoordinatorOptions options)
    : hub_(hub), options_(options), board_(options.board), start_(std::chrono::steady_clock::now()) {}

double Coordinator::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Coordinator::handle(const WorkerHub::Inbound& in) {
  const double t = now();
  if (!in.message) {
    auto it = connectionWorker_.find(in.connection);
    if (it != connectionWorker_.end()) board_.remove_worker(it->second, t);
    return;
  }
  const Message& m = *in.message;
  if (const auto* h = std::get_if<HelloMsg>(&m)) {
    connectionWorker_[in.connection] = h->workerId;
    hub_.bind(h->workerId, in.connection);
    board_.add_worker(h->workerId, t);
  } else if (const auto* hb = std::get_if<HeartbeatMsg>(&m)) {
    board_.heartbeat(hb->workerId, t);
  } else if (const auto* r = std::get_if<ResultMsg>(&m)) {
    board_.on_result(*r, t);
  } else if (const auto* b = std::get_if<ByeMsg>(&m)) {
    board_.remove_worker(b->workerId, t);
  }
}

void Coordinator::pump(double seconds) {
  const double until = now() + seconds;
  while (now() < until) {
    if (auto in = hub_.poll(options_.pollInterval)) handle(*in);
  }
}

std::vector<ResultMsg> Coordinator::run(const std::vector<TaskMsg>& tasks) {
  for (const auto& t : tasks) board_.submit(t);
  std::map<std::uint64_t, ResultMsg> results;
  double lastLive = now();
  while (results.size() < tasks.size()) {
    for (auto in = hub_.poll(options_.pollInterval); in; in = hub_.poll(0.0)) handle(*in);
    const double t = now();
    auto swept = board_.sweep(t);
    for (const auto& c : swept.cancels) hub_.send(c.workerId, CancelMsg{c.task.taskId});
    for (const auto& a : board_.dispatch(t)) {
      if (!hub_.send(a.workerId, a.task)) board_.remove_worker(a.workerId, t);
    }
    if (board_.live_workers() > 0) {
      lastLive = t;
    } else if (t - lastLive > options_.noWorkerTimeout) {
      for (const auto& task : tasks) {
        if (results.count(task.taskId)) continue;
        ResultMsg failed;
        failed.taskId = task.taskId;
        failed.status = ResultStatus::failed;
        failed.error = "no live workers";
        results[task.taskId] = failed;
      }
      break;
    }
    for (auto& r : board_.take_completed()) results[r.taskId] = r;
  }
  std::vector<ResultMsg> out;
  for (const auto& t : tasks) out.push_back(results.at(t.taskId));
  return out;
}

LocalWorkerPool::LocalWorkerPool(std::size_t workers, CoordinatorOptions options, std::vector<FaultPlan> faults,
                                 double heartbeatInterval)
    : coordinator_(hub_, options), heartbeatInterval_(heartbeatInterval) {
  for (std::size_t i = 0; i < workers; ++i) add_worker(i < faults.size() ? faults[i] : FaultPlan{});
  // Let every hello arrive so the first batch sees all workers.
  while (coordinator_.live_workers() < workers) coordinator_.pump(0.01);
}

void LocalWorkerPool::add_worker(const FaultPlan& faults) {
  auto [mainEnd, workerEnd] = make_local_channel();
  hub_.attach(mainEnd);
  WorkerOptions opts;
  opts.workerId = "local-" + std::to_string(counter_++);
  opts.heartbeatInterval = heartbeatInterval_;
  opts.faults = faults;
  threads_.emplace_back([workerEnd = workerEnd, opts] { serve_worker(*workerEnd, opts); });
}

LocalWorkerPool::~LocalWorkerPool() {
  hub_.broadcast_bye();
  hub_.shutdown();
  for (auto& t : threads_) t.join();
}

TaskMsg make_task(std::uint64_t taskId, const EvaluationTarget& target, const tuner::SearchSpace& space,
                  const tuner::EvalRequest& request) {
  TaskMsg t;
  t.taskId = taskId;
  t.scenarioPath = target.scenarioPath;
  t.scenarioInline = target.scenarioInline;
  t.configuration = space.values(request.config);
  t.timeLimit = target.timeLimit;
  t.repetitionIndex = request.repetition;
  t.seed = request.seed;
  t.virtualClock = target.virtualClock;
  t.evaluationsPerSecond = target.evaluationsPerSecond;
  return t;
}

tuner::Sample to_sample(const ResultMsg& result, const EvaluationTarget& target) {
  tuner::Sample s;
  s.failed = result.status == ResultStatus::failed;
  s.valid = !s.failed && result.valid;
  s.softScore = result.softScore;
  s.firstValidAt = result.firstValidAt;
  s.lastImprovementAt = result.lastImprovementAt;
  if (s.failed) {
    s.seconds = target.timeLimit;
  } else {
    s.seconds = target.virtualClock ? result.solverSeconds : result.wallSeconds;
  }
  return s;
}

DirectEvaluator::DirectEvaluator(const tuner::SearchSpace& space, EvaluationTarget target)
    : space_(space), target_(std::move(target)) {}

std::vector<tuner::Sample> DirectEvaluator::evaluate_batch(const std::vector<tuner::EvalRequest>& requests) {
  std::vector<tuner::Sample> out;
  for (const auto& r : requests) {
    out.push_back(to_sample(worker_run(make_task(nextTaskId_++, target_, space_, r), "direct", &cache_), target_));
  }
  return out;
}

OrchestratedEvaluator::OrchestratedEvaluator(Coordinator& coordinator, const tuner::SearchSpace& space,
                                             EvaluationTarget target)
    : coordinator_(coordinator), space_(space), target_(std::move(target)) {}

std::vector<tuner::Sample> OrchestratedEvaluator::evaluate_batch(const std::vector<tuner::EvalRequest>& requests) {
  std::vector<TaskMsg> tasks;
  for (const auto& r : requests) tasks.push_back(make_task(coordinator_.next_task_id(), target_, space_, r));
  std::vector<tuner::Sample> out;
  for (const auto& res : coordinator_.run(tasks)) out.push_back(to_sample(res, target_));
  return out;
}

}  // namespace placetune::orchestrator
