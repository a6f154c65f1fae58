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

#include "placetune/model/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace placetune::model {

using nlohmann::json;

namespace {

json nfp_to_json(const NfpMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

json resources_to_json(const ResourceVector& v) {
  json j = json::object();
  for (auto k : kAllResourceKinds) j[std::string(to_string(k))] = at(v, k);
  return j;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected number");
  return v.get<double>();
}

const json& get_array(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) fail(path + "." + key, "expected array");
  return v;
}

void check_object(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected object");
}

NfpMap get_nfp(const json& obj, const char* key, const std::string& path) {
  NfpMap m;
  auto it = obj.find(key);
  if (it == obj.end()) return m;
  std::string p = path + "." + key;
  check_object(*it, p);
  for (const auto& [name, value] : it->items()) m[name] = get_number(value, p + "." + name);
  return m;
}

ResourceVector get_resources(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  std::string p = path + "." + key;
  check_object(v, p);
  ResourceVector out{};
  for (const auto& [name, value] : v.items()) {
    ResourceKind kind;
    try {
      kind = resource_kind_from_string(name);
    } catch (const ScenarioError&) {
      fail(p + "." + name, "unknown resource kind");
    }
    at(out, kind) = get_number(value, p + "." + name);
  }
  for (auto k : kAllResourceKinds) {
    if (!v.contains(std::string(to_string(k)))) fail(p + "." + std::string(to_string(k)), "missing required field");
  }
  return out;
}

}  // namespace

std::string to_scenario_text(const Scenario& s) {
  json doc;
  doc["version"] = kScenarioFormat;
  doc["meta"] = {{"seed", s.meta.seed}, {"family", s.meta.family}};
  json types = json::array();
  for (const auto& t : s.componentTypes) types.push_back({{"id", t.id}, {"name", t.name}});
  doc["componentTypes"] = std::move(types);

  json impls = json::array();
  for (const auto& impl : s.implementations) {
    json reqs = json::array();
    for (const auto& sub : impl.requirements) {
      reqs.push_back({{"type", sub.requiredType}, {"nfpMin", nfp_to_json(sub.nfpMin)}, {"nfpMax", nfp_to_json(sub.nfpMax)}});
    }
    impls.push_back({{"id", impl.id},
                     {"type", impl.ofType},
                     {"provides", nfp_to_json(impl.provides)},
                     {"resourceReq", resources_to_json(impl.resourceReq)},
                     {"requires", std::move(reqs)}});
  }
  doc["implementations"] = std::move(impls);

  json hw = json::array();
  for (const auto& h : s.hardware) {
    hw.push_back({{"id", h.id}, {"capacity", resources_to_json(h.capacity)}, {"energyCoeff", resources_to_json(h.energyCoeff)}});
  }
  doc["hardware"] = std::move(hw);

  json reqs = json::array();
  for (const auto& r : s.requests) {
    reqs.push_back({{"id", r.id}, {"target", r.target}, {"nfpMin", nfp_to_json(r.nfpMin)}, {"nfpMax", nfp_to_json(r.nfpMax)}});
  }
  doc["requests"] = std::move(reqs);
  return doc.dump(2) + "\n";
}

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("$: malformed document: ") + e.what());
  }
  check_object(doc, "$");
  std::string version = get_string(doc, "version", "$");
  if (version != kScenarioFormat) {
    fail("$.version", "unsupported scenario format '" + version + "' (expected '" + std::string(kScenarioFormat) + "')");
  }

  Scenario s;
  if (auto it = doc.find("meta"); it != doc.end()) {
    check_object(*it, "$.meta");
    if (auto seed = it->find("seed"); seed != it->end()) {
      if (!seed->is_number_integer()) fail("$.meta.seed", "expected integer");
      s.meta.seed = seed->get<std::int64_t>();
    }
    if (it->contains("family")) s.meta.family = get_string(*it, "family", "$.meta");
  }

  const json& types = get_array(doc, "componentTypes", "$");
  for (std::size_t i = 0; i < types.size(); ++i) {
    std::string p = "$.componentTypes[" + std::to_string(i) + "]";
    check_object(types[i], p);
    ComponentType t;
    t.id = get_string(types[i], "id", p);
    t.name = types[i].contains("name") ? get_string(types[i], "name", p) : t.id;
    s.componentTypes.push_back(std::move(t));
  }

  const json& impls = get_array(doc, "implementations", "$");
  for (std::size_t i = 0; i < impls.size(); ++i) {
    std::string p = "$.implementations[" + std::to_string(i) + "]";
    const json& j = impls[i];
    check_object(j, p);
    Implementation impl;
    impl.id = get_string(j, "id", p);
    impl.ofType = get_string(j, "type", p);
    impl.provides = get_nfp(j, "provides", p);
    impl.resourceReq = get_resources(j, "resourceReq", p);
    if (j.contains("requires")) {
      const json& reqs = get_array(j, "requires", p);
      for (std::size_t k = 0; k < reqs.size(); ++k) {
        std::string rp = p + ".requires[" + std::to_string(k) + "]";
        check_object(reqs[k], rp);
        SubRequirement sub;
        sub.requiredType = get_string(reqs[k], "type", rp);
        sub.nfpMin = get_nfp(reqs[k], "nfpMin", rp);
        sub.nfpMax = get_nfp(reqs[k], "nfpMax", rp);
        impl.requirements.push_back(std::move(sub));
      }
    }
    s.implementations.push_back(std::move(impl));
  }

  const json& hw = get_array(doc, "hardware", "$");
  for (std::size_t i = 0; i < hw.size(); ++i) {
    std::string p = "$.hardware[" + std::to_string(i) + "]";
    check_object(hw[i], p);
    HardwareComponent h;
    h.id = get_string(hw[i], "id", p);
    h.capacity = get_resources(hw[i], "capacity", p);
    h.energyCoeff = get_resources(hw[i], "energyCoeff", p);
    s.hardware.push_back(std::move(h));
  }

  const json& reqs = get_array(doc, "requests", "$");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    std::string p = "$.requests[" + std::to_string(i) + "]";
    check_object(reqs[i], p);
    Request r;
    r.id = get_string(reqs[i], "id", p);
    r.target = get_string(reqs[i], "target", p);
    r.nfpMin = get_nfp(reqs[i], "nfpMin", p);
    r.nfpMax = get_nfp(reqs[i], "nfpMax", p);
    s.requests.push_back(std::move(r));
  }

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ScenarioError(path.string() + ": cannot write scenario file");
  out << to_scenario_text(scenario);
  if (!out) throw ScenarioError(path.string() + ": write failed");
}

}  // namespace placetune::model
