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


#include "placetune/orchestrator/protocol.hpp"

#include "json.hpp"

namespace placetune::orchestrator {

namespace {

using nlohmann::json;

template <typename T>
T get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ProtocolError(std::string("bad field '") + key + "'");
  }
}

std::optional<double> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ProtocolError(std::string("bad field '") + key + "'");
  return it->get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Encoder {
  json& j;
  void operator()(const HelloMsg& m) const {
    j["kind"] = "hello";
    j["workerId"] = m.workerId;
  }
  void operator()(const HeartbeatMsg& m) const {
    j["kind"] = "heartbeat";
    j["workerId"] = m.workerId;
  }
  void operator()(const TaskMsg& m) const {
    j["kind"] = "task";
    j["taskId"] = m.taskId;
    j["scenarioPath"] = m.scenarioPath;
    j["scenarioInline"] = m.scenarioInline;
    j["configuration"] = m.configuration;
    j["timeLimit"] = m.timeLimit;
    j["repetitionIndex"] = m.repetitionIndex;
    j["seed"] = m.seed;
    j["virtualClock"] = m.virtualClock;
    j["evaluationsPerSecond"] = m.evaluationsPerSecond;
  }
  void operator()(const ResultMsg& m) const {
    j["kind"] = "result";
    j["taskId"] = m.taskId;
    j["status"] = m.status == ResultStatus::ok ? "ok" : "failed";
    j["valid"] = m.valid;
    j["softScore"] = m.softScore;
    j["hardScore"] = m.hardScore;
    j["firstValidAt"] = optional_number(m.firstValidAt);
    j["lastImprovementAt"] = optional_number(m.lastImprovementAt);
    j["solverSeconds"] = m.solverSeconds;
    j["workerId"] = m.workerId;
    j["wallSeconds"] = m.wallSeconds;
    j["error"] = m.error;
  }
  void operator()(const CancelMsg& m) const {
    j["kind"] = "cancel";
    j["taskId"] = m.taskId;
  }
  void operator()(const ByeMsg& m) const {
    j["kind"] = "bye";
    j["workerId"] = m.workerId;
    j["reason"] = m.reason;
  }
};

}  // namespace

std::string encode(const Message& message) {
  json j;
  j["proto"] = kProtocolVersion;
  std::visit(Encoder{j}, message);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Message decode(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    throw ProtocolError("message is not valid JSON");
  }
  if (!j.is_object()) throw ProtocolError("message must be an object");
  const auto proto = get<std::string>(j, "proto");
  if (proto != kProtocolVersion) throw ProtocolError("unsupported protocol '" + proto + "'");
  const auto kind = get<std::string>(j, "kind");
  if (kind == "hello") return HelloMsg{get<std::string>(j, "workerId")};
  if (kind == "heartbeat") return HeartbeatMsg{get<std::string>(j, "workerId")};
  if (kind == "task") {
    TaskMsg m;
    m.taskId = get<std::uint64_t>(j, "taskId");
    m.scenarioPath = get<std::string>(j, "scenarioPath");
    m.scenarioInline = get<std::string>(j, "scenarioInline");
    m.configuration = get<std::map<std::string, double>>(j, "configuration");
    m.timeLimit = get<double>(j, "timeLimit");
    m.repetitionIndex = get<std::uint64_t>(j, "repetitionIndex");
    m.seed = get<std::uint64_t>(j, "seed");
    m.virtualClock = get<bool>(j, "virtualClock");
    m.evaluationsPerSecond = get<double>(j, "evaluationsPerSecond");
    return m;
  }
  if (kind == "result") {
    ResultMsg m;
    m.taskId = get<std::uint64_t>(j, "taskId");
    const auto status = get<std::string>(j, "status");
    if (status != "ok" && status != "failed") throw ProtocolError("bad field 'status'");
    m.status = status == "ok" ? ResultStatus::ok : ResultStatus::failed;
    m.valid = get<bool>(j, "valid");
    m.softScore = get<double>(j, "softScore");
    m.hardScore = get<std::int64_t>(j, "hardScore");
    m.firstValidAt = get_optional(j, "firstValidAt");
    m.lastImprovementAt = get_optional(j, "lastImprovementAt");
    m.solverSeconds = get<double>(j, "solverSeconds");
    m.workerId = get<std::string>(j, "workerId");
    m.wallSeconds = get<double>(j, "wallSeconds");
    m.error = get<std::string>(j, "error");
    return m;
  }
  if (kind == "cancel") return CancelMsg{get<std::uint64_t>(j, "taskId")};
  if (kind == "bye") return ByeMsg{get<std::string>(j, "workerId"), get<std::string>(j, "reason")};
  throw ProtocolError("unknown message kind '" + kind + "'");
}

const char* kind_name(const Message& message) {
  static const char* names[] = {"hello", "heartbeat", "task", "result", "cancel", "bye"};
  return names[message.index()];
}

}  // namespace placetune::orchestrator
