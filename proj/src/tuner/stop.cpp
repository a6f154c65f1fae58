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


#include "placetune/tuner/stop.hpp"

#include <charconv>

namespace placetune::tuner {

std::string to_string(StopSpec::Kind kind) {
  switch (kind) {
    case StopSpec::Kind::quantity: return "quantity";
    case StopSpec::Kind::adaptive: return "adaptive";
    case StopSpec::Kind::time: return "time";
    case StopSpec::Kind::improvement: return "improvement";
    case StopSpec::Kind::guaranteed: return "guaranteed";
  }
  return "unknown";
}

std::string describe(const StopSpec& spec) {
  std::string out = to_string(spec.kind);
  if (spec.kind != StopSpec::Kind::guaranteed) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, spec.value);
    out += '(';
    out.append(buf, res.ptr);
    out += ')';
  }
  return out;
}

bool stop_fires(const StopSpec& spec, const StopView& v) {
  switch (spec.kind) {
    case StopSpec::Kind::quantity: return static_cast<double>(v.measured) >= spec.value;
    case StopSpec::Kind::adaptive:
      return static_cast<double>(v.measured) >= spec.value * static_cast<double>(v.spaceSize);
    case StopSpec::Kind::time: return v.elapsed >= spec.value;
    case StopSpec::Kind::improvement: return static_cast<double>(v.sinceImprovement) >= spec.value;
    case StopSpec::Kind::guaranteed:
      return v.best.has_value() && v.defaultObjective.has_value() && *v.best < *v.defaultObjective;
  }
  return false;
}

std::optional<std::string> should_stop(const std::vector<StopSpec>& specs, const StopView& view) {
  bool haveMandatory = false, mandatoryAll = true;
  bool haveAny = false;
  std::optional<std::string> anyFired;
  std::string mandatoryText;
  for (const auto& s : specs) {
    const bool fires = stop_fires(s, view);
    if (s.mandatory) {
      haveMandatory = true;
      mandatoryAll = mandatoryAll && fires;
      if (!mandatoryText.empty()) mandatoryText += '+';
      mandatoryText += describe(s);
    } else {
      haveAny = true;
      if (fires && !anyFired) anyFired = describe(s);
    }
  }
  if (!haveMandatory && !haveAny) return std::nullopt;
  if (haveMandatory && !mandatoryAll) return std::nullopt;
  if (haveAny && !anyFired) return std::nullopt;
  if (haveMandatory && haveAny) return mandatoryText + '+' + *anyFired;
  return haveAny ? *anyFired : mandatoryText;
}

}  // namespace placetune::tuner
