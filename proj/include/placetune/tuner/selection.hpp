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


#ifndef PLACETUNE_TUNER_SELECTION_HPP
#define PLACETUNE_TUNER_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "placetune/tuner/search_space.hpp"
#include "placetune/tuner/sobol.hpp"
#include "placetune/tuner/surrogate.hpp"
#include "placetune/util/random.hpp"

namespace placetune::tuner {

/// Ranks (SearchSpace::rank) of configurations already measured or in flight.
using MeasuredSet = std::unordered_set<std::uint64_t>;

/// Maps a unit-cube point to value indices: floor(u * n), clamped.
Configuration configuration_from_point(const SearchSpace& space, const std::vector<double>& u);

/// Lowest-rank configuration not in `measured`; nullopt when exhausted.
std::optional<Configuration> first_unmeasured(const SearchSpace& space, const MeasuredSet& measured);

enum class SelectionKind { random, sobol };

/// Space-filling sampler used while no model is trusted.
class Sampler {
 public:
  Sampler(const SearchSpace& space, SelectionKind kind, std::uint64_t seed);

  /// Next unmeasured configuration, or nullopt when the space is exhausted.
  /// Measured draws are skipped; after too many skips the sampler falls back
  /// to a lexicographic scan.
  std::optional<Configuration> next(const MeasuredSet& measured);

  /// Sobol index of the next draw. Index 0 is never drawn.
  std::uint64_t sobol_index() const { return index_; }

 private:
  const SearchSpace* space_;
  SelectionKind kind_;
  std::optional<SobolSequence> sobol_;
  util::Rng rng_;
  std::uint64_t index_ = 1;
};

/// One Sobol draw without skipping: configuration_from_point(point(index)).
Configuration sobol_configuration(const SearchSpace& space, std::uint64_t index);

enum class ModelKind { regression, bayesian, combined };

struct SuggestOptions {
  std::size_t minSamples = 20;
  double topFraction = 0.2;
};

/// Log of the density ratio good(v)/bad(v) per (parameter, value). Objectives
/// are sorted ascending (ties by rank); the lower half is "good". Counts use
/// add-one smoothing.
std::vector<std::vector<double>> density_log_ratios(const SearchSpace& space, const std::vector<Observation>& obs);

/// Whether the selected model may propose configurations yet.
bool model_ready(ModelKind kind, const std::vector<Observation>& obs, const Surrogate* surrogate,
                 const SuggestOptions& options);

/// Proposes an unmeasured configuration:
/// - regression: lowest predicted objective;
/// - bayesian: highest density ratio;
/// - combined: lowest-predicted fraction, then highest density ratio.
/// Ties go to the lower rank. nullopt when the space is exhausted.
std::optional<Configuration> suggest_next(ModelKind kind, const SearchSpace& space, const std::vector<Observation>& obs,
                                          const MeasuredSet& measured, const Surrogate* surrogate,
                                          const SuggestOptions& options = {});

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_SELECTION_HPP
