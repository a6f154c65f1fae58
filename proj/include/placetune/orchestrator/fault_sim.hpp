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


#ifndef PLACETUNE_ORCHESTRATOR_FAULT_SIM_HPP
#define PLACETUNE_ORCHESTRATOR_FAULT_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "placetune/orchestrator/task_board.hpp"

namespace placetune::orchestrator {

/// Behaviour of one simulated worker.
enum class SimBehaviour {
  reliable,
  crash,      // connection drops while a task is held
  vanish,     // stops heartbeating and answering while a task is held; never returns
  stall,      // goes silent mid-task for longer than the heartbeat timeout, then resumes
  duplicate,  // sends every result twice
  slow        // sometimes runs past the time limit plus grace
};

const char* to_string(SimBehaviour b);

struct FaultSimOptions {
  BoardConfig board;
  double step = 0.5;
  double heartbeatInterval = 2.0;
  double timeLimit = 10.0;
  double horizon = 20000.0;  // simulated seconds before a run counts as stalled
};

struct FaultSimReport {
  std::uint64_t seed = 0;
  std::vector<SimBehaviour> behaviours;
  std::size_t tasks = 0;
  std::size_t batches = 0;
  std::size_t accepted = 0;           // results accepted from workers
  std::size_t failedByBoard = 0;      // synthesized failures (overrun, attempts)
  std::size_t duplicatesDiscarded = 0;
  std::size_t deaths = 0;
  std::size_t requeues = 0;
  double finishedAt = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Drives a TaskBoard against simulated workers on a fake clock. Worker 0 is
/// always reliable; the others draw a behaviour from the seed. Checks that
/// every submitted task completes exactly once, that no live worker pair
/// shares a task, that dead workers hold nothing, and that the run finishes.
FaultSimReport simulate_faults(std::uint64_t seed, const FaultSimOptions& options = {});

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_FAULT_SIM_HPP
