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


#include "placetune/tuner/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>

#include "placetune/util/random.hpp"

namespace placetune::tuner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_objective(const Sample& s) { return s.valid && !s.failed ? s.softScore : kInf; }

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double objective(const std::vector<Sample>& samples) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : samples) {
    if (s.valid && !s.failed) {
      sum += s.softScore;
      ++n;
    }
  }
  return n == 0 ? kInf : sum / static_cast<double>(n);
}

bool Measurement::valid() const { return std::isfinite(objective); }

void aggregate(Measurement& m) {
  m.objective = objective(m.samples);
  const std::size_t n = m.samples.size();
  double sum = 0.0;
  for (const auto& s : m.samples) sum += sample_objective(s);
  m.mean = n ? sum / static_cast<double>(n) : kInf;
  m.stddev = 0.0;
  if (n >= 2 && std::isfinite(m.mean)) {
    double ss = 0.0;
    for (const auto& s : m.samples) ss += (sample_objective(s) - m.mean) * (sample_objective(s) - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
}

std::uint64_t repetition_seed(std::uint64_t experimentSeed, std::uint64_t configRank, std::size_t repetition) {
  return util::hash_combine(util::hash_combine(experimentSeed, configRank), repetition);
}

TunerSettings default_tuner_settings() { return TunerSettings{}; }

ExperimentResult run_experiment(const TunerSettings& settings, const SearchSpace& space, Evaluator& evaluator) {
  if (settings.stopConditions.empty()) throw SettingsError("at least one stop condition is required");
  if (!(settings.perEvalTimeLimit > 0.0)) throw SettingsError("perEvalTimeLimit must be positive");
  if (space.size() == 0) throw SettingsError("empty search space");

  std::optional<Configuration> defaultConfig;
  if (settings.defaultConfiguration) {
    try {
      defaultConfig = space.from_values(*settings.defaultConfiguration);
    } catch (const SpaceError& e) {
      throw SettingsError(std::string("defaultConfiguration: ") + e.what());
    }
  }
  const bool needSurrogate = settings.model != ModelKind::bayesian ||
                             settings.repeater.kind == RepeaterSpec::Kind::model_aware_student;

  ExperimentResult result;
  MeasuredSet measured;
  std::vector<Observation> obs;
  Sampler sampler(space, settings.selection, settings.seed);
  std::optional<Surrogate> surrogate;
  std::optional<double> best;
  std::optional<double> defaultObjective;
  std::uint64_t sinceImprovement = 0;
  double elapsed = 0.0;
  const auto wallStart = std::chrono::steady_clock::now();
  auto now = [&] {
    return settings.virtualTime ? elapsed
                                : std::chrono::duration<double>(std::chrono::steady_clock::now() - wallStart).count();
  };

  for (;;) {
    std::size_t cap = std::max<std::size_t>(1, settings.workers);
    for (const auto& s : settings.stopConditions) {
      if (s.kind == StopSpec::Kind::quantity) {
        auto remaining = std::max(1.0, s.value - static_cast<double>(measured.size()));
        cap = std::min(cap, static_cast<std::size_t>(remaining));
      }
    }

    std::vector<Configuration> batch;
    while (batch.size() < cap) {
      std::optional<Configuration> c;
      if (defaultConfig && !measured.count(space.rank(*defaultConfig))) {
        c = *defaultConfig;
      } else if (model_ready(settings.model, obs, surrogate ? &*surrogate : nullptr, settings.suggest)) {
        c = suggest_next(settings.model, space, obs, measured, surrogate ? &*surrogate : nullptr, settings.suggest);
        if (c) result.modelUsed = true;
      } else {
        c = sampler.next(measured);
      }
      if (!c) break;
      measured.insert(space.rank(*c));
      batch.push_back(std::move(*c));
    }
    if (batch.empty()) {
      result.stopReason = "exhausted";
      break;
    }

    std::vector<std::vector<Sample>> samples(batch.size());
    std::vector<char> done(batch.size(), 0);
    for (;;) {
      std::vector<EvalRequest> requests;
      std::vector<std::size_t> owner;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        if (done[i]) continue;
        requests.push_back({batch[i], samples[i].size(),
                            repetition_seed(settings.seed, space.rank(batch[i]), samples[i].size())});
        owner.push_back(i);
      }
      if (requests.empty()) break;
      std::vector<Sample> out;
      try {
        out = evaluator.evaluate_batch(requests);
      } catch (const std::exception&) {
        out.clear();
      }
      if (out.size() != requests.size()) {
        Sample failed;
        failed.failed = true;
        failed.seconds = settings.perEvalTimeLimit;
        out.assign(requests.size(), failed);
      }
      result.evaluations += requests.size();
      double round = 0.0;
      for (std::size_t k = 0; k < out.size(); ++k) {
        round = std::max(round, out[k].seconds);
        samples[owner[k]].push_back(out[k]);
      }
      elapsed += round;
      for (std::size_t i : owner) {
        std::vector<double> values;
        for (const auto& s : samples[i]) values.push_back(sample_objective(s));
        bool predictedWorse = surrogate && best && surrogate->predict(batch[i]) > *best;
        done[i] = repeater_stop(settings.repeater, values, predictedWorse);
      }
    }

    for (std::size_t i = 0; i < batch.size(); ++i) {
      Measurement m;
      m.iteration = result.log.size() + 1;
      m.config = batch[i];
      m.samples = std::move(samples[i]);
      aggregate(m);
      m.elapsed = now();
      if (defaultConfig && m.config == *defaultConfig) defaultObjective = m.objective;
      if (m.valid() && (!best || m.objective < *best)) {
        best = m.objective;
        result.best = m.config;
        sinceImprovement = 0;
      } else {
        ++sinceImprovement;
      }
      obs.push_back({m.config, m.objective});
      result.log.push_back(std::move(m));
    }
    if (needSurrogate) surrogate = fit_and_validate(obs, space, settings.surrogate);

    StopView view{measured.size(), space.size(), now(), sinceImprovement, best, defaultObjective};
    if (auto reason = should_stop(settings.stopConditions, view)) {
      result.stopReason = *reason;
      break;
    }
  }
  result.bestObjective = best.value_or(kInf);
  result.elapsed = now();
  return result;
}

std::string report_csv(const ExperimentResult& result, const SearchSpace& space) {
  std::string out = "iteration";
  for (const auto& p : space.parameters()) out += "," + p.name;
  out += ",repetitions,mean_objective,valid,elapsed_s\n";
  for (const auto& m : result.log) {
    out += std::to_string(m.iteration);
    for (std::size_t d = 0; d < space.dimensions(); ++d) out += "," + number(space.value(m.config, d));
    out += "," + std::to_string(m.samples.size()) + "," + number(m.objective) + "," + (m.valid() ? "1" : "0") + "," +
           number(m.elapsed) + "\n";
  }
  out += "# best_configuration," + (result.best ? space.describe(*result.best) : std::string("none")) + "\n";
  out += "# best_objective," + number(result.bestObjective) + "\n";
  out += "# stop_reason," + result.stopReason + "\n";
  out += "# configurations," + std::to_string(result.log.size()) + "\n";
  out += "# evaluations," + std::to_string(result.evaluations) + "\n";
  out += "# elapsed_s," + number(result.elapsed) + "\n";
  out += "# objective,mean soft score over valid repetitions; inf when none is valid\n";
  return out;
}

}  // namespace placetune::tuner
