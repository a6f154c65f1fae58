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


#ifndef PLACETUNE_ORCHESTRATOR_PROTOCOL_HPP
#define PLACETUNE_ORCHESTRATOR_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace placetune::orchestrator {

inline constexpr const char* kProtocolVersion = "placetune/1";

struct HelloMsg {
  std::string workerId;
  bool operator==(const HelloMsg&) const = default;
};

struct HeartbeatMsg {
  std::string workerId;
  bool operator==(const HeartbeatMsg&) const = default;
};

struct TaskMsg {
  std::uint64_t taskId = 0;
  std::string scenarioPath;    // used when scenarioInline is empty
  std::string scenarioInline;  // scenario document text
  std::map<std::string, double> configuration;
  double timeLimit = 10.0;
  std::uint64_t repetitionIndex = 0;
  std::uint64_t seed = 0;
  bool virtualClock = false;
  double evaluationsPerSecond = 20000.0;
  bool operator==(const TaskMsg&) const = default;
};

enum class ResultStatus { ok, failed };

struct ResultMsg {
  std::uint64_t taskId = 0;
  ResultStatus status = ResultStatus::ok;
  bool valid = false;
  double softScore = 0.0;
  std::int64_t hardScore = 0;
  std::optional<double> firstValidAt;
  std::optional<double> lastImprovementAt;
  double solverSeconds = 0.0;  // solver clock at the end of the run
  std::string workerId;
  double wallSeconds = 0.0;
  std::string error;
  bool operator==(const ResultMsg&) const = default;
};

struct CancelMsg {
  std::uint64_t taskId = 0;
  bool operator==(const CancelMsg&) const = default;
};

struct ByeMsg {
  std::string workerId;
  std::string reason;
  bool operator==(const ByeMsg&) const = default;
};

using Message = std::variant<HelloMsg, HeartbeatMsg, TaskMsg, ResultMsg, CancelMsg, ByeMsg>;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object per line, without the trailing newline:
/// {"proto":"placetune/1","kind":"task",...}.
std::string encode(const Message& message);

/// Throws ProtocolError on malformed lines, unknown kinds or a different
/// protocol version.
Message decode(const std::string& line);

const char* kind_name(const Message& message);

}  // namespace placetune::orchestrator

#endif  // PLACETUNE_ORCHESTRATOR_PROTOCOL_HPP
