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


#ifndef PLACETUNE_ORCHESTRATOR_WORKER_HPP
#define PLACETUNE_ORCHESTRATOR_WORKER_HPP

#include <memory>
#include <string>

#include "placetune/model/instance.hpp"
#include "placetune/orchestrator/protocol.hpp"
#include "placetune/orchestrator/transport.hpp"

namespace placetune::orchestrator {

/// Keeps the last compiled scenario so repeated tasks skip parsing.
class ScenarioCache {
 public:
  std::shared_ptr<const model::Instance> get(const TaskMsg& task);

 private:
  std::string key_;
  std::shared_ptr<const model::Instance> instance_;
};

/// Runs the annealer for one task. Never throws: load or solve errors come
/// back as a failed result carrying the message.
ResultMsg worker_run(const TaskMsg& task, const std::string& workerId, ScenarioCache* cache = nullptr);

/// Misbehaviour switches for failure testing.
struct FaultPlan {
  int silentAfterTasks = -1;  // after this many results: no more output, connection kept open
  int dropAfterTasks = -1;    // after this many results: close the connection
  int crashOnTask = -1;       // close the connection on receiving this task (1-based), no result
  bool duplicateResults = false;
};

struct WorkerOptions {
  std::string workerId = "worker";
  double heartbeatInterval = 2.0;
  FaultPlan faults;
};

/// Worker service loop: hello, then one task at a time, heartbeats from a
/// side thread. Returns when the channel closes or a bye arrives.
void serve_worker(LineChannel& channel, const WorkerOptions& options);

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_WORKER_HPP
