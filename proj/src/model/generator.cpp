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

#include "placetune/model/generator.hpp"

#include <algorithm>
#include <cmath>

#include "placetune/model/instance.hpp"
#include "placetune/util/random.hpp"

namespace placetune::model {

namespace {

using util::Rng;
using util::round1;
using util::round2;

constexpr const char* kQuality = "quality";
constexpr const char* kLatency = "latency";
constexpr int kWitnessAttempts = 32;

struct TypeNode {
  std::size_t scenarioIndex;
  std::vector<std::size_t> children;  // scenario type indices
};

std::size_t types_per_app(std::size_t depth, std::size_t branching) {
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    total += level;
    level *= branching;
  }
  return total;
}

/// Appends a full type tree in preorder and returns the root index.
std::size_t build_types(Scenario& s, std::vector<TypeNode>& nodes, std::size_t app, std::size_t depth,
                        std::size_t branching, std::size_t& counter) {
  std::size_t self = s.componentTypes.size();
  std::size_t k = counter++;
  s.componentTypes.push_back({"a" + std::to_string(app) + ".t" + std::to_string(k),
                              "App" + std::to_string(app) + "Comp" + std::to_string(k)});
  nodes.push_back({self, {}});
  if (depth > 1) {
    for (std::size_t c = 0; c < branching; ++c) {
      std::size_t child = build_types(s, nodes, app, depth - 1, branching, counter);
      nodes[self].children.push_back(child);
    }
  }
  return self;
}

}  // namespace

GeneratedScenario generate_with_witness(const GeneratorParams& p) {
  if (p.softwareDepth < 1 || p.branching < 1) {
    throw GeneratorError("unsatisfiable generator parameters: softwareDepth and branching must be >= 1");
  }
  if (!(p.hardwareScale > 0) || !std::isfinite(p.hardwareScale)) {
    throw GeneratorError("unsatisfiable generator parameters: hardwareScale must be positive");
  }
  auto seed = static_cast<std::uint64_t>(p.seed);
  Rng softRng(seed, 1);
  Rng hwRng(seed, 2);
  Rng reqRng(seed, 3);

  Scenario s;
  s.meta.seed = p.seed;
  s.meta.family = p.family;

  const std::size_t apps = p.requests == 0 ? 1 : (p.requests + 1) / 2;
  const std::size_t perApp = types_per_app(p.softwareDepth, p.branching);
  std::vector<TypeNode> nodes;
  std::vector<std::size_t> appRoots;
  for (std::size_t a = 0; a < apps; ++a) {
    std::size_t counter = 0;
    appRoots.push_back(build_types(s, nodes, a, p.softwareDepth, p.branching, counter));
  }
  const std::size_t typeCount = s.componentTypes.size();

  std::vector<std::size_t> implsPerType(typeCount, p.branching);
  if (p.implementationCount) {
    if (*p.implementationCount < typeCount) {
      throw GeneratorError("unsatisfiable generator parameters: " + std::to_string(*p.implementationCount) +
                           " implementations for " + std::to_string(typeCount) + " component types");
    }
    for (std::size_t t = 0; t < typeCount; ++t) {
      implsPerType[t] = *p.implementationCount / typeCount + (t < *p.implementationCount % typeCount ? 1 : 0);
    }
  }

  // Implementations: provided NFPs and resource needs first, requirements
  // second, since requirement bounds are drawn from the child's offers.
  std::vector<std::vector<std::size_t>> implsOf(typeCount);
  for (std::size_t t = 0; t < typeCount; ++t) {
    for (std::size_t j = 0; j < implsPerType[t]; ++j) {
      Implementation impl;
      impl.id = s.componentTypes[t].id + ".i" + std::to_string(j);
      impl.ofType = s.componentTypes[t].id;
      impl.provides[kQuality] = round1(softRng.uniform(1.0, 10.0));
      impl.provides[kLatency] = round1(softRng.uniform(5.0, 100.0));
      at(impl.resourceReq, ResourceKind::cpu) = round1(softRng.uniform(0.5, 4.0));
      at(impl.resourceReq, ResourceKind::ram) = round1(softRng.uniform(0.5, 8.0));
      at(impl.resourceReq, ResourceKind::disk) = round1(softRng.uniform(1.0, 20.0));
      at(impl.resourceReq, ResourceKind::network) = round1(softRng.uniform(0.1, 2.0));
      implsOf[t].push_back(s.implementations.size());
      s.implementations.push_back(std::move(impl));
    }
  }
  for (std::size_t t = 0; t < typeCount; ++t) {
    const auto& children = nodes[t].children;
    if (children.empty()) continue;
    for (std::size_t j = 0; j < implsOf[t].size(); ++j) {
      std::size_t needed = j % p.branching + 1;
      for (std::size_t c = 0; c < needed; ++c) {
        std::size_t childType = children[c];
        const auto& anchor = s.implementations[implsOf[childType][softRng.index(implsOf[childType].size())]];
        SubRequirement sub;
        sub.requiredType = s.componentTypes[childType].id;
        sub.nfpMin[kQuality] = std::max(0.0, round1(anchor.provides.at(kQuality) - round1(softRng.uniform(0.0, 3.0))));
        sub.nfpMax[kLatency] = round1(anchor.provides.at(kLatency) + round1(softRng.uniform(0.0, 20.0)));
        s.implementations[implsOf[t][j]].requirements.push_back(std::move(sub));
      }
    }
  }

  std::size_t hwCount = p.hardwareCount.value_or(
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.hardwareScale * static_cast<double>(p.requests * perApp)))));
  for (std::size_t h = 0; h < hwCount; ++h) {
    HardwareComponent hw;
    hw.id = "hw" + std::to_string(h);
    at(hw.capacity, ResourceKind::cpu) = round1(hwRng.uniform(4.0, 16.0));
    at(hw.capacity, ResourceKind::ram) = round1(hwRng.uniform(8.0, 32.0));
    at(hw.capacity, ResourceKind::disk) = round1(hwRng.uniform(40.0, 200.0));
    at(hw.capacity, ResourceKind::network) = round1(hwRng.uniform(4.0, 16.0));
    at(hw.energyCoeff, ResourceKind::cpu) = round2(hwRng.uniform(1.0, 5.0));
    at(hw.energyCoeff, ResourceKind::ram) = round2(hwRng.uniform(0.1, 0.5));
    at(hw.energyCoeff, ResourceKind::disk) = round2(hwRng.uniform(0.01, 0.05));
    at(hw.energyCoeff, ResourceKind::network) = round2(hwRng.uniform(0.5, 2.0));
    s.hardware.push_back(std::move(hw));
  }

  std::vector<std::size_t> witnessRoot;
  for (std::size_t r = 0; r < p.requests; ++r) {
    std::size_t rootType = appRoots[r % apps];
    std::size_t w = implsOf[rootType][reqRng.index(implsOf[rootType].size())];
    witnessRoot.push_back(w);
    const auto& impl = s.implementations[w];
    Request req;
    req.id = "r" + std::to_string(r);
    req.target = s.componentTypes[rootType].id;
    req.nfpMin[kQuality] = std::max(0.0, round1(impl.provides.at(kQuality) - round1(reqRng.uniform(0.0, 3.0))));
    req.nfpMax[kLatency] = round1(impl.provides.at(kLatency) + round1(reqRng.uniform(0.0, 20.0)));
    s.requests.push_back(std::move(req));
  }

  Instance inst(s);
  for (int attempt = 0; attempt < kWitnessAttempts; ++attempt) {
    std::vector<WitnessEntry> witness;
    std::vector<MilliVector> used(inst.hw_count(), MilliVector{});
    bool placed = true;
    std::vector<std::size_t> candidates;

    auto place = [&](std::size_t task, std::size_t impl) {
      candidates.clear();
      const auto& req = inst.impl(impl).req;
      for (std::size_t h = 0; h < inst.hw_count(); ++h) {
        bool fits = true;
        for (std::size_t k = 0; k < kResourceKinds && fits; ++k) fits = used[h][k] + req[k] <= inst.hw(h).cap[k];
        if (fits) candidates.push_back(h);
      }
      if (candidates.empty()) return false;
      std::size_t h = candidates[reqRng.index(candidates.size())];
      for (std::size_t k = 0; k < kResourceKinds; ++k) used[h][k] += req[k];
      witness.push_back({task, impl, h});
      return true;
    };
    auto fill = [&](auto&& self, std::size_t task, std::size_t impl) -> bool {
      if (!place(task, impl)) return false;
      for (const auto& link : inst.links(task, impl)) {
        const auto& bounds = inst.child_bounds(impl, link);
        std::vector<std::size_t> options;
        for (std::size_t c : inst.impls_of_type(inst.task(link.task).type)) {
          if (inst.satisfies(c, bounds)) options.push_back(c);
        }
        if (options.empty()) return false;
        if (!self(self, link.task, options[reqRng.index(options.size())])) return false;
      }
      return true;
    };

    for (std::size_t r = 0; r < inst.request_count() && placed; ++r) {
      placed = fill(fill, inst.request_tasks(r).first, witnessRoot[r]);
    }
    if (placed) {
      std::sort(witness.begin(), witness.end(), [](const auto& a, const auto& b) { return a.task < b.task; });
      return {std::move(s), std::move(witness)};
    }
  }
  throw GeneratorError("unsatisfiable generator parameters: no witness placement for " +
                       std::to_string(p.requests) + " requests on " + std::to_string(hwCount) +
                       " hardware units after " + std::to_string(kWitnessAttempts) + " attempts");
}

Scenario generate_scenario(const GeneratorParams& params) { return generate_with_witness(params).scenario; }

GeneratorParams table_family(std::size_t row, std::int64_t seed) {
  struct Row {
    const char* name;
    std::size_t requests, depth, branching, impls, hw;
  };
  // impls == 0 keeps the default count (branching per type).
  static constexpr Row kRows[kTableFamilyRows] = {
      {"trivial", 1, 1, 1, 0, 1},
      {"small", 1, 2, 2, 0, 5},
      {"small-much-hardware", 1, 2, 2, 0, 15},
      {"small-complex-software", 1, 4, 2, 62, 47},
      {"medium", 10, 2, 2, 0, 68},
      {"medium-much-hardware", 10, 2, 2, 0, 225},
      {"medium-complex-software", 10, 4, 2, 155, 465},
      {"large", 20, 2, 2, 0, 90},
      {"large-much-hardware", 20, 2, 2, 0, 300},
      {"large-complex-software", 20, 4, 2, 310, 930},
      {"huge", 50, 2, 2, 0, 225},
      {"huge-much-hardware", 50, 2, 2, 0, 750},
      {"huge-complex-software", 50, 4, 2, 620, 2325},
  };
  if (row >= kTableFamilyRows) throw GeneratorError("table family row out of range: " + std::to_string(row));
  const Row& r = kRows[row];
  GeneratorParams p;
  p.requests = r.requests;
  p.softwareDepth = r.depth;
  p.branching = r.branching;
  p.seed = seed;
  if (r.impls != 0) p.implementationCount = r.impls;
  p.hardwareCount = r.hw;
  p.family = r.name;
  return p;
}

GeneratorParams chain_family(std::size_t requests, std::size_t chainLength, std::size_t hwCount,
                             std::int64_t seed) {
  GeneratorParams p;
  p.requests = requests;
  p.softwareDepth = chainLength;
  p.branching = 1;
  p.seed = seed;
  p.hardwareCount = hwCount;
  p.family = "chain";
  return p;
}

}  // namespace placetune::model
