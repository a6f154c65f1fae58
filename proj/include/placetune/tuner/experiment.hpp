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


#ifndef PLACETUNE_TUNER_EXPERIMENT_HPP
#define PLACETUNE_TUNER_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "placetune/tuner/repeater.hpp"
#include "placetune/tuner/search_space.hpp"
#include "placetune/tuner/selection.hpp"
#include "placetune/tuner/stop.hpp"
#include "placetune/tuner/surrogate.hpp"

namespace placetune::tuner {

/// One repetition of one configuration.
struct Sample {
  bool valid = false;
  double softScore = 0.0;
  std::optional<double> firstValidAt;
  std::optional<double> lastImprovementAt;
  double seconds = 0.0;  ///< run time charged to the experiment clock
  bool failed = false;   ///< crash, overrun or transport loss
};

/// +inf when no sample is valid, else the mean soft score of valid samples.
double objective(const std::vector<Sample>& samples);

struct Measurement {
  std::size_t iteration = 0;  ///< 1-based order of completion
  Configuration config;
  std::vector<Sample> samples;
  double objective = 0.0;
  double mean = 0.0;    ///< mean of per-sample objectives (+inf if any is invalid)
  double stddev = 0.0;  ///< sample standard deviation of per-sample objectives
  double elapsed = 0.0; ///< experiment clock after this measurement
  bool valid() const;
};

/// Recomputes objective, mean and stddev from the samples.
void aggregate(Measurement& m);

struct EvalRequest {
  Configuration config;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;  ///< hash of (experiment seed, configuration, repetition)
};

/// Runs repetitions. Results are returned in request order.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::vector<Sample> evaluate_batch(const std::vector<EvalRequest>& requests) = 0;
};

std::uint64_t repetition_seed(std::uint64_t experimentSeed, std::uint64_t configRank, std::size_t repetition);

struct TunerSettings {
  SelectionKind selection = SelectionKind::sobol;
  ModelKind model = ModelKind::bayesian;
  RepeaterSpec repeater = RepeaterSpec::quantity(2);
  std::vector<StopSpec> stopConditions{StopSpec::improvement(50)};
  double perEvalTimeLimit = 10.0;
  double productionTimeLimit = 900.0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Experiment time is the sum of sample seconds (max within a batch)
  /// instead of wall time; makes reports reproducible.
  bool virtualTime = true;
  std::optional<std::map<std::string, double>> defaultConfiguration;
  SurrogateOptions surrogate;
  SuggestOptions suggest;
};

/// Settings used for the annealer study: Sobol selection, density-ratio
/// model, improvement(50) stop, two repetitions, 10 s per run, 900 s in production.
TunerSettings default_tuner_settings();

class SettingsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TunerSettings parse_settings_text(const std::string& text);
TunerSettings load_settings(const std::filesystem::path& path);
std::string to_settings_text(const TunerSettings& settings);

struct ExperimentResult {
  std::optional<Configuration> best;
  double bestObjective = 0.0;
  std::vector<Measurement> log;
  std::string stopReason;
  std::uint64_t evaluations = 0;  ///< repetitions requested from the evaluator
  double elapsed = 0.0;           ///< experiment clock at the end
  bool modelUsed = false;         ///< whether the model proposed any configuration
};

/// Throws SettingsError on inconsistent settings (no stop condition,
/// non-positive per-run limit, unknown default values).
ExperimentResult run_experiment(const TunerSettings& settings, const SearchSpace& space, Evaluator& evaluator);

/// CSV rows (iteration, parameters..., repetitions, mean_objective, valid,
/// elapsed_s) followed by "# key,value" summary lines.
std::string report_csv(const ExperimentResult& result, const SearchSpace& space);

}  // namespace placetune::tuner

#endif  // PLACETUNE_TUNER_EXPERIMENT_HPP
