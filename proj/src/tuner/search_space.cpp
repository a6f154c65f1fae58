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


#include "placetune/tuner/search_space.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace placetune::tuner {

SearchSpace::SearchSpace(std::vector<Parameter> parameters) : params_(std::move(parameters)) {
  std::set<std::string> names;
  for (const auto& p : params_) {
    if (!names.insert(p.name).second) throw SpaceError("duplicate parameter name: " + p.name);
    if (p.values.empty()) throw SpaceError("parameter has no values: " + p.name);
    size_ *= p.values.size();
  }
}

std::uint64_t SearchSpace::rank(const Configuration& c) const {
  std::uint64_t r = 0;
  for (std::size_t d = 0; d < params_.size(); ++d) r = r * params_[d].values.size() + c[d];
  return r;
}

Configuration SearchSpace::unrank(std::uint64_t r) const {
  Configuration c(params_.size());
  for (std::size_t d = params_.size(); d-- > 0;) {
    c[d] = static_cast<std::size_t>(r % params_[d].values.size());
    r /= params_[d].values.size();
  }
  return c;
}

bool SearchSpace::contains(const Configuration& c) const {
  if (c.size() != params_.size()) return false;
  for (std::size_t d = 0; d < c.size(); ++d) {
    if (c[d] >= params_[d].values.size()) return false;
  }
  return true;
}

std::map<std::string, double> SearchSpace::values(const Configuration& c) const {
  std::map<std::string, double> out;
  for (std::size_t d = 0; d < params_.size(); ++d) out[params_[d].name] = value(c, d);
  return out;
}

Configuration SearchSpace::from_values(const std::map<std::string, double>& values) const {
  Configuration c(params_.size());
  for (std::size_t d = 0; d < params_.size(); ++d) {
    auto it = values.find(params_[d].name);
    if (it == values.end()) throw SpaceError("missing parameter: " + params_[d].name);
    const auto& list = params_[d].values;
    auto pos = std::find(list.begin(), list.end(), it->second);
    if (pos == list.end()) throw SpaceError("value not in list for parameter " + params_[d].name);
    c[d] = static_cast<std::size_t>(pos - list.begin());
  }
  if (values.size() != params_.size()) throw SpaceError("unknown parameter in configuration");
  return c;
}

std::string SearchSpace::describe(const Configuration& c) const {
  std::string out;
  for (std::size_t d = 0; d < params_.size(); ++d) {
    if (d) out += ';';
    out += params_[d].name;
    out += '=';
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value(c, d));
    out.append(buf, res.ptr);
  }
  return out;
}

SearchSpace solver_search_space() {
  auto list = [](const auto& arr) { return std::vector<double>(arr.begin(), arr.end()); };
  return SearchSpace({
      {"subComponentUnassignedFactor", list(solver::kFactorValues)},
      {"softwareComponentUnassignedFactor", list(solver::kFactorValues)},
      {"hardScoreStartingTemperature", list(solver::kTemperatureValues)},
      {"softScoreStartingTemperature", list(solver::kTemperatureValues)},
      {"neighborhoodSize", list(solver::kNeighborhoodValues)},
  });
}

solver::SAParams to_solver_params(const SearchSpace& space, const Configuration& c, double timeLimit,
                                  std::uint64_t seed) {
  auto v = space.values(c);
  solver::SAParams p;
  p.subComponentUnassignedFactor = static_cast<std::int64_t>(v.at("subComponentUnassignedFactor"));
  p.softwareComponentUnassignedFactor = static_cast<std::int64_t>(v.at("softwareComponentUnassignedFactor"));
  p.hardScoreStartingTemperature = v.at("hardScoreStartingTemperature");
  p.softScoreStartingTemperature = v.at("softScoreStartingTemperature");
  p.neighborhoodSize = static_cast<std::int64_t>(v.at("neighborhoodSize"));
  p.timeLimit = timeLimit;
  p.seed = seed;
  return p;
}

}  // namespace placetune::tuner
