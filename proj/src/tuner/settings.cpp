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


#include <fstream>
#include <sstream>

#include "json.hpp"
#include "placetune/tuner/experiment.hpp"

namespace placetune::tuner {

namespace {

using nlohmann::json;

template <typename T>
T field(const json& obj, const char* key, const std::string& path, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SettingsError(path + "." + key + ": wrong type");
  }
}

RepeaterSpec parse_repeater(const json& j) {
  if (!j.is_object()) throw SettingsError("$.repeater: expected object");
  const auto type = field<std::string>(j, "type", "$.repeater", "quantity");
  RepeaterSpec r;
  if (type == "quantity") {
    r = RepeaterSpec::quantity(field<std::size_t>(j, "count", "$.repeater", 2));
    if (r.count == 0) throw SettingsError("$.repeater.count: must be positive");
  } else if (type == "student" || type == "model-aware-student") {
    r = RepeaterSpec::student(field<std::size_t>(j, "maxReps", "$.repeater", 10),
                              field<double>(j, "relativeCI", "$.repeater", 0.05));
    if (type == "model-aware-student") {
      r.kind = RepeaterSpec::Kind::model_aware_student;
      r.relaxFactor = field<double>(j, "relaxFactor", "$.repeater", 2.0);
    }
    if (r.maxReps == 0 || !(r.relativeCI >= 0.0)) throw SettingsError("$.repeater: invalid student arguments");
  } else {
    throw SettingsError("$.repeater.type: unknown repeater '" + type + "'");
  }
  return r;
}

StopSpec parse_stop(const json& j, const std::string& path) {
  if (!j.is_object()) throw SettingsError(path + ": expected object");
  const auto type = field<std::string>(j, "type", path, "");
  StopSpec s;
  if (type == "quantity") s.kind = StopSpec::Kind::quantity;
  else if (type == "adaptive") s.kind = StopSpec::Kind::adaptive;
  else if (type == "time") s.kind = StopSpec::Kind::time;
  else if (type == "improvement") s.kind = StopSpec::Kind::improvement;
  else if (type == "guaranteed") s.kind = StopSpec::Kind::guaranteed;
  else throw SettingsError(path + ".type: unknown stop condition '" + type + "'");
  s.value = field<double>(j, "value", path, 0.0);
  s.mandatory = field<bool>(j, "mandatory", path, false);
  if (s.value < 0.0) throw SettingsError(path + ".value: must be non-negative");
  return s;
}

const char* repeater_name(RepeaterSpec::Kind k) {
  switch (k) {
    case RepeaterSpec::Kind::quantity: return "quantity";
    case RepeaterSpec::Kind::student: return "student";
    case RepeaterSpec::Kind::model_aware_student: return "model-aware-student";
  }
  return "quantity";
}

const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::regression: return "regression";
    case ModelKind::bayesian: return "bayesian";
    case ModelKind::combined: return "combined";
  }
  return "bayesian";
}

}  // namespace

TunerSettings parse_settings_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SettingsError(std::string("settings are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SettingsError("$: expected object");
  TunerSettings s;
  const auto selection = field<std::string>(j, "selection", "$", "sobol");
  if (selection == "sobol") s.selection = SelectionKind::sobol;
  else if (selection == "random") s.selection = SelectionKind::random;
  else throw SettingsError("$.selection: unknown selection '" + selection + "'");

  const auto model = field<std::string>(j, "model", "$", "bayesian");
  if (model == "bayesian") s.model = ModelKind::bayesian;
  else if (model == "regression") s.model = ModelKind::regression;
  else if (model == "combined") s.model = ModelKind::combined;
  else throw SettingsError("$.model: unknown model '" + model + "'");

  if (j.contains("repeater")) s.repeater = parse_repeater(j["repeater"]);
  if (j.contains("stopConditions")) {
    const auto& list = j["stopConditions"];
    if (!list.is_array()) throw SettingsError("$.stopConditions: expected array");
    s.stopConditions.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.stopConditions.push_back(parse_stop(list[i], "$.stopConditions[" + std::to_string(i) + "]"));
    }
  }
  if (s.stopConditions.empty()) throw SettingsError("$.stopConditions: at least one stop condition is required");

  s.perEvalTimeLimit = field<double>(j, "perEvalTimeLimit", "$", s.perEvalTimeLimit);
  s.productionTimeLimit = field<double>(j, "productionTimeLimit", "$", s.productionTimeLimit);
  if (!(s.perEvalTimeLimit > 0.0)) throw SettingsError("$.perEvalTimeLimit: must be positive");
  if (!(s.productionTimeLimit > 0.0)) throw SettingsError("$.productionTimeLimit: must be positive");
  s.seed = field<std::uint64_t>(j, "seed", "$", 0);
  s.workers = field<std::size_t>(j, "workers", "$", 1);
  if (s.workers == 0) throw SettingsError("$.workers: must be positive");
  s.virtualTime = field<bool>(j, "virtualTime", "$", true);
  if (j.contains("defaultConfiguration")) {
    s.defaultConfiguration = field<std::map<std::string, double>>(j, "defaultConfiguration", "$", {});
  }
  s.surrogate.minSamples = field<std::size_t>(j, "modelMinSamples", "$", s.surrogate.minSamples);
  s.suggest.minSamples = s.surrogate.minSamples;
  s.surrogate.threshold = field<double>(j, "validationThreshold", "$", s.surrogate.threshold);
  s.suggest.topFraction = field<double>(j, "topFraction", "$", s.suggest.topFraction);
  if (!(s.suggest.topFraction > 0.0 && s.suggest.topFraction <= 1.0)) {
    throw SettingsError("$.topFraction: must be in (0, 1]");
  }
  return s;
}

TunerSettings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SettingsError(path.string() + ": cannot read settings");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_settings_text(ss.str());
  } catch (const SettingsError& e) {
    throw SettingsError(path.string() + ": " + e.what());
  }
}

std::string to_settings_text(const TunerSettings& s) {
  json j;
  j["selection"] = s.selection == SelectionKind::sobol ? "sobol" : "random";
  j["model"] = model_name(s.model);
  json rep;
  rep["type"] = repeater_name(s.repeater.kind);
  if (s.repeater.kind == RepeaterSpec::Kind::quantity) {
    rep["count"] = s.repeater.count;
  } else {
    rep["maxReps"] = s.repeater.maxReps;
    rep["relativeCI"] = s.repeater.relativeCI;
    if (s.repeater.kind == RepeaterSpec::Kind::model_aware_student) rep["relaxFactor"] = s.repeater.relaxFactor;
  }
  j["repeater"] = rep;
  j["stopConditions"] = json::array();
  for (const auto& c : s.stopConditions) {
    json sc;
    sc["type"] = to_string(c.kind);
    if (c.kind != StopSpec::Kind::guaranteed) sc["value"] = c.value;
    if (c.mandatory) sc["mandatory"] = true;
    j["stopConditions"].push_back(sc);
  }
  j["perEvalTimeLimit"] = s.perEvalTimeLimit;
  j["productionTimeLimit"] = s.productionTimeLimit;
  j["seed"] = s.seed;
  j["workers"] = s.workers;
  j["virtualTime"] = s.virtualTime;
  if (s.defaultConfiguration) j["defaultConfiguration"] = *s.defaultConfiguration;
  j["modelMinSamples"] = s.surrogate.minSamples;
  j["validationThreshold"] = s.surrogate.threshold;
  j["topFraction"] = s.suggest.topFraction;
  return j.dump(2) + "\n";
}

}  // namespace placetune::tuner
