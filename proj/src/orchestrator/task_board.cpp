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


#include "placetune/orchestrator/task_board.hpp"

#include <algorithm>
#include <stdexcept>

namespace placetune::orchestrator {

void TaskBoard::add_worker(const std::string& workerId, double now) {
  auto [it, inserted] = workers_.try_emplace(workerId);
  if (!inserted && it->second.state != WorkerState::dead) {
    it->second.lastHeartbeatAt = now;
    return;
  }
  if (inserted) workerOrder_.push_back(workerId);
  it->second = WorkerRecord{workerId, now, WorkerState::idle, std::nullopt};
  log(now, "worker " + workerId + " joined");
}

void TaskBoard::heartbeat(const std::string& workerId, double now) {
  auto it = workers_.find(workerId);
  if (it == workers_.end() || it->second.state == WorkerState::dead) return;
  it->second.lastHeartbeatAt = now;
}

void TaskBoard::remove_worker(const std::string& workerId, double now) {
  auto it = workers_.find(workerId);
  if (it == workers_.end() || it->second.state == WorkerState::dead) return;
  auto task = it->second.task;
  it->second.state = WorkerState::dead;
  it->second.task.reset();
  log(now, "worker " + workerId + " left");
  if (task) requeue_or_fail(*task, now, nullptr);
}

void TaskBoard::submit(const TaskMsg& task) {
  if (outstanding_.count(task.taskId) || done_.count(task.taskId)) {
    throw std::invalid_argument("duplicate taskId " + std::to_string(task.taskId));
  }
  outstanding_[task.taskId].msg = task;
  queue_.push_back(task.taskId);
}

std::vector<Assignment> TaskBoard::dispatch(double now) {
  std::vector<Assignment> out;
  for (const auto& id : workerOrder_) {
    if (queue_.empty()) break;
    auto& w = workers_[id];
    if (w.state != WorkerState::idle) continue;
    const std::uint64_t taskId = queue_.front();
    queue_.pop_front();
    auto& t = outstanding_.at(taskId);
    ++t.attempts;
    ++attemptLog_[taskId];
    t.holder = id;
    t.startedAt = now;
    t.everAssigned.insert(id);
    w.state = WorkerState::busy;
    w.task = taskId;
    out.push_back({id, t.msg});
  }
  return out;
}

void TaskBoard::release_worker(WorkerRecord& w) {
  if (w.state == WorkerState::busy) w.state = WorkerState::idle;
  w.task.reset();
}

void TaskBoard::complete(const ResultMsg& result) {
  auto it = outstanding_.find(result.taskId);
  if (it->second.holder) {
    auto& w = workers_.at(*it->second.holder);
    if (w.task == result.taskId) release_worker(w);
  }
  queue_.erase(std::remove(queue_.begin(), queue_.end(), result.taskId), queue_.end());
  outstanding_.erase(it);
  done_.insert(result.taskId);
  completed_.push_back(result);
}

ResultDisposition TaskBoard::on_result(const ResultMsg& result, double now) {
  auto wit = workers_.find(result.workerId);
  if (wit != workers_.end() && wit->second.state != WorkerState::dead) {
    wit->second.lastHeartbeatAt = now;
    if (wit->second.task == result.taskId) release_worker(wit->second);
  }
  if (done_.count(result.taskId)) {
    ++duplicates_;
    log(now, "duplicate result for task " + std::to_string(result.taskId) + " from " + result.workerId +
                 " discarded");
    return ResultDisposition::duplicate;
  }
  auto it = outstanding_.find(result.taskId);
  if (it == outstanding_.end() || !it->second.everAssigned.count(result.workerId)) {
    log(now, "result for unknown task " + std::to_string(result.taskId) + " from " + result.workerId);
    return ResultDisposition::unknown;
  }
  complete(result);
  return ResultDisposition::accepted;
}

void TaskBoard::requeue_or_fail(std::uint64_t taskId, double now, SweepOutcome* out) {
  auto& t = outstanding_.at(taskId);
  t.holder.reset();
  if (t.attempts >= config_.maxAttempts) {
    ResultMsg failed;
    failed.taskId = taskId;
    failed.status = ResultStatus::failed;
    failed.error = "no attempts left";
    log(now, "task " + std::to_string(taskId) + " failed after " + std::to_string(t.attempts) + " attempts");
    complete(failed);
    if (out) out->failed.push_back(taskId);
    return;
  }
  queue_.push_front(taskId);
  log(now, "task " + std::to_string(taskId) + " requeued");
  if (out) out->requeued.push_back(taskId);
}

TaskBoard::SweepOutcome TaskBoard::sweep(double now) {
  SweepOutcome out;
  for (const auto& id : workerOrder_) {
    auto& w = workers_[id];
    if (w.state == WorkerState::dead) continue;
    if (now - w.lastHeartbeatAt > config_.heartbeatTimeout) {
      auto task = w.task;
      w.state = WorkerState::dead;
      w.task.reset();
      out.died.push_back(id);
      log(now, "worker " + id + " declared dead");
      if (task) requeue_or_fail(*task, now, &out);
    }
  }
  std::vector<std::uint64_t> overrun;
  for (const auto& [id, t] : outstanding_) {
    // Virtual-clock runs end after a fixed number of scorings; wall time says nothing about them.
    if (!t.holder || t.msg.virtualClock) continue;
    const double grace = std::max(config_.minGrace, t.msg.timeLimit * config_.graceFraction);
    if (now - t.startedAt > t.msg.timeLimit + grace) overrun.push_back(id);
  }
  for (auto id : overrun) {
    const std::string holder = *outstanding_.at(id).holder;
    ResultMsg failed;
    failed.taskId = id;
    failed.status = ResultStatus::failed;
    failed.workerId = holder;
    failed.error = "time limit exceeded";
    log(now, "task " + std::to_string(id) + " overran on " + holder);
    out.cancels.push_back({holder, outstanding_.at(id).msg});
    complete(failed);
    out.failed.push_back(id);
  }
  return out;
}

std::vector<ResultMsg> TaskBoard::take_completed() {
  std::vector<ResultMsg> out;
  out.swap(completed_);
  return out;
}

std::size_t TaskBoard::live_workers() const {
  return static_cast<std::size_t>(std::count_if(workers_.begin(), workers_.end(), [](const auto& kv) {
    return kv.second.state != WorkerState::dead;
  }));
}

int TaskBoard::attempts(std::uint64_t taskId) const {
  auto it = attemptLog_.find(taskId);
  return it == attemptLog_.end() ? 0 : it->second;
}

}  // namespace placetune::orchestrator
