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


#include "placetune/tuner/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace placetune::tuner {

Configuration configuration_from_point(const SearchSpace& space, const std::vector<double>& u) {
  Configuration c(space.dimensions());
  for (std::size_t d = 0; d < c.size(); ++d) {
    const std::size_t n = space.levels(d);
    auto k = static_cast<std::size_t>(std::floor(u[d] * static_cast<double>(n)));
    c[d] = std::min(k, n - 1);
  }
  return c;
}

std::optional<Configuration> first_unmeasured(const SearchSpace& space, const MeasuredSet& measured) {
  if (measured.size() >= space.size()) return std::nullopt;
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    if (!measured.count(r)) return space.unrank(r);
  }
  return std::nullopt;
}

Sampler::Sampler(const SearchSpace& space, SelectionKind kind, std::uint64_t seed)
    : space_(&space), kind_(kind), rng_(seed, 31) {
  if (kind_ == SelectionKind::sobol) sobol_.emplace(space.dimensions());
}

Configuration sobol_configuration(const SearchSpace& space, std::uint64_t index) {
  SobolSequence seq(space.dimensions());
  return configuration_from_point(space, seq.point(index));
}

std::optional<Configuration> Sampler::next(const MeasuredSet& measured) {
  if (measured.size() >= space_->size()) return std::nullopt;
  const std::uint64_t maxSkips = 4 * space_->size() + 64;
  for (std::uint64_t tries = 0; tries < maxSkips; ++tries) {
    Configuration c;
    if (kind_ == SelectionKind::sobol) {
      c = configuration_from_point(*space_, sobol_->point(index_++));
    } else {
      c = space_->unrank(rng_.next() % space_->size());
    }
    if (!measured.count(space_->rank(c))) return c;
  }
  return first_unmeasured(*space_, measured);
}

std::vector<std::vector<double>> density_log_ratios(const SearchSpace& space, const std::vector<Observation>& obs) {
  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> ranks(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) ranks[i] = space.rank(obs[i].config);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (obs[a].objective != obs[b].objective) return obs[a].objective < obs[b].objective;
    return ranks[a] < ranks[b];
  });
  const std::size_t nGood = std::max<std::size_t>(1, obs.size() / 2);
  const std::size_t nBad = obs.size() - std::min(nGood, obs.size());

  std::vector<std::vector<double>> out(space.dimensions());
  for (std::size_t d = 0; d < space.dimensions(); ++d) {
    const std::size_t n = space.levels(d);
    std::vector<double> good(n, 1.0), bad(n, 1.0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t v = obs[order[k]].config[d];
      (k < nGood ? good : bad)[v] += 1.0;
    }
    out[d].resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      double g = good[v] / static_cast<double>(nGood + n);
      double b = bad[v] / static_cast<double>(nBad + n);
      out[d][v] = std::log(g) - std::log(b);
    }
  }
  return out;
}

bool model_ready(ModelKind kind, const std::vector<Observation>& obs, const Surrogate* surrogate,
                 const SuggestOptions& options) {
  if (kind != ModelKind::bayesian) return surrogate != nullptr;
  if (obs.size() < std::max<std::size_t>(2, options.minSamples)) return false;
  return std::any_of(obs.begin(), obs.end(), [](const Observation& o) { return std::isfinite(o.objective); });
}

namespace {

double ratio_score(const std::vector<std::vector<double>>& table, const Configuration& c) {
  double s = 0.0;
  for (std::size_t d = 0; d < c.size(); ++d) s += table[d][c[d]];
  return s;
}

}  // namespace

std::optional<Configuration> suggest_next(ModelKind kind, const SearchSpace& space, const std::vector<Observation>& obs,
                                          const MeasuredSet& measured, const Surrogate* surrogate,
                                          const SuggestOptions& options) {
  if (measured.size() >= space.size()) return std::nullopt;
  if (kind != ModelKind::bayesian && surrogate == nullptr) {
    throw std::logic_error("regression-based suggestion needs a validated surrogate");
  }

  if (kind == ModelKind::bayesian) {
    auto table = density_log_ratios(space, obs);
    std::optional<Configuration> best;
    double bestScore = -std::numeric_limits<double>::infinity();
    for (std::uint64_t r = 0; r < space.size(); ++r) {
      if (measured.count(r)) continue;
      Configuration c = space.unrank(r);
      double s = ratio_score(table, c);
      if (!best || s > bestScore) {
        best = std::move(c);
        bestScore = s;
      }
    }
    return best;
  }

  struct Candidate {
    double prediction;
    std::uint64_t rank;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(space.size() - measured.size());
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    if (!measured.count(r)) candidates.push_back({surrogate->predict(space.unrank(r)), r});
  }
  auto byPrediction = [](const Candidate& a, const Candidate& b) {
    if (a.prediction != b.prediction) return a.prediction < b.prediction;
    return a.rank < b.rank;
  };
  if (kind == ModelKind::regression) {
    return space.unrank(std::min_element(candidates.begin(), candidates.end(), byPrediction)->rank);
  }

  const auto top = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.topFraction * static_cast<double>(candidates.size()))));
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(top), candidates.end(),
                    byPrediction);
  auto table = density_log_ratios(space, obs);
  std::size_t best = 0;
  double bestScore = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < top; ++i) {
    double s = ratio_score(table, space.unrank(candidates[i].rank));
    if (i == 0 || s > bestScore) {
      best = i;
      bestScore = s;
    }
  }
  return space.unrank(candidates[best].rank);
}

}  // namespace placetune::tuner
