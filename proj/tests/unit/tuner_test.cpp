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


#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "scripted.hpp"
#include "synthetic.hpp"
#include "placetune/tuner/experiment.hpp"
#include "placetune/tuner/sobol.hpp"

using namespace placetune::tuner;
using scripted::ScriptedEvaluator;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Sample valid_sample(double soft, double seconds = 1.0) {
  Sample s;
  s.valid = true;
  s.softScore = soft;
  s.seconds = seconds;
  return s;
}

SearchSpace grid(std::vector<std::size_t> levels) {
  std::vector<Parameter> params;
  for (std::size_t d = 0; d < levels.size(); ++d) {
    Parameter p{"p" + std::to_string(d), {}};
    for (std::size_t v = 0; v < levels[d]; ++v) p.values.push_back(static_cast<double>(v));
    params.push_back(p);
  }
  return SearchSpace(params);
}

}  // namespace

TEST_CASE("search space: the annealer space has 51200 configurations") {
  SearchSpace s = solver_search_space();
  CHECK(s.size() == 51200);
  CHECK(s.dimensions() == 5);
  for (std::uint64_t r : {0ULL, 1ULL, 12345ULL, 51199ULL}) CHECK(s.rank(s.unrank(r)) == r);
  auto defaults = s.from_values({{"subComponentUnassignedFactor", 1},
                                 {"softwareComponentUnassignedFactor", 5},
                                 {"hardScoreStartingTemperature", 100},
                                 {"softScoreStartingTemperature", 100},
                                 {"neighborhoodSize", 50}});
  auto p = to_solver_params(s, defaults, 10.0, 3);
  CHECK(p.subComponentUnassignedFactor == 1);
  CHECK(p.softwareComponentUnassignedFactor == 5);
  CHECK(p.neighborhoodSize == 50);
  CHECK(p.seed == 3);
  CHECK_THROWS_AS(s.from_values({{"neighborhoodSize", 7}}), SpaceError);
  CHECK_THROWS_AS(SearchSpace({{"a", {1}}, {"a", {2}}}), SpaceError);
  CHECK_THROWS_AS(SearchSpace(std::vector<Parameter>{Parameter{"a", {}}}), SpaceError);
}

TEST_CASE("sobol: points match the reference generator") {
  SobolSequence seq(8);
  const double expected[9][8] = {
      {0, 0, 0, 0, 0, 0, 0, 0},
      {.5, .5, .5, .5, .5, .5, .5, .5},
      {.75, .25, .25, .25, .75, .75, .25, .75},
      {.25, .75, .75, .75, .25, .25, .75, .25},
      {.375, .375, .625, .875, .375, .125, .375, .875},
      {.875, .875, .125, .375, .875, .625, .875, .375},
      {.625, .125, .875, .625, .625, .875, .125, .125},
      {.125, .625, .375, .125, .125, .375, .625, .625},
      {.1875, .3125, .9375, .4375, .5625, .3125, .4375, .9375},
  };
  for (std::uint64_t i = 0; i < 9; ++i) {
    auto p = seq.point(i);
    for (std::size_t d = 0; d < 8; ++d) CHECK(p[d] == expected[i][d]);
  }
  SobolSequence wide(21);
  const double p33[21] = {0.546875, 0.765625, 0.203125, 0.046875, 0.640625, 0.421875, 0.296875,
                          0.171875, 0.484375, 0.546875, 0.890625, 0.453125, 0.953125, 0.484375,
                          0.484375, 0.609375, 0.671875, 0.546875, 0.921875, 0.015625, 0.828125};
  const double p39[21] = {0.171875, 0.890625, 0.828125, 0.671875, 0.015625, 0.546875, 0.421875,
                          0.046875, 0.359375, 0.921875, 0.765625, 0.828125, 0.828125, 0.609375,
                          0.859375, 0.234375, 0.046875, 0.171875, 0.796875, 0.390625, 0.703125};
  auto a = wide.point(33);
  auto b = wide.point(39);
  for (std::size_t d = 0; d < 21; ++d) {
    CHECK(a[d] == p33[d]);
    CHECK(b[d] == p39[d]);
  }
  CHECK_THROWS(SobolSequence(22));
}

TEST_CASE("sobol: index 1 selects the middle value of every list") {
  SearchSpace s = solver_search_space();
  Configuration c = sobol_configuration(s, 1);
  CHECK(c == Configuration{4, 4, 5, 5, 4});
  SearchSpace odd = grid({3, 5, 1});
  CHECK(sobol_configuration(odd, 1) == Configuration{1, 2, 0});
}

TEST_CASE("sampler: two-value space is covered by the first two draws") {
  SearchSpace s = grid({2});
  Sampler sampler(s, SelectionKind::sobol, 0);
  MeasuredSet measured;
  std::set<std::size_t> seen;
  for (int i = 0; i < 2; ++i) {
    auto c = sampler.next(measured);
    REQUIRE(c);
    measured.insert(s.rank(*c));
    seen.insert((*c)[0]);
  }
  CHECK(seen.size() == 2);
  CHECK_FALSE(sampler.next(measured).has_value());
}

TEST_CASE("sampler: draws never repeat and stay in the space") {
  for (auto kind : {SelectionKind::sobol, SelectionKind::random}) {
    SearchSpace s = grid({3, 4, 2});
    Sampler sampler(s, kind, 9);
    MeasuredSet measured;
    for (std::uint64_t i = 0; i < s.size(); ++i) {
      auto c = sampler.next(measured);
      REQUIRE(c);
      REQUIRE(s.contains(*c));
      REQUIRE(measured.insert(s.rank(*c)).second);
    }
    CHECK_FALSE(sampler.next(measured).has_value());
  }
}

TEST_CASE("objective: invalid-dominated mean") {
  CHECK(objective({Sample{}, Sample{}}) == kInf);
  CHECK(objective({valid_sample(1000), valid_sample(1100)}) == doctest::Approx(1050));
  CHECK(objective({valid_sample(900), Sample{}}) == doctest::Approx(900));
  Sample failed = valid_sample(10);
  failed.failed = true;
  CHECK(objective({failed}) == kInf);
}

TEST_CASE("surrogate: sample gate and rank deficiency") {
  SearchSpace s = grid({5, 5, 5});
  std::vector<Observation> few;
  for (std::size_t i = 0; i < 10; ++i) few.push_back({s.unrank(i * 7), static_cast<double>(i)});
  CHECK_FALSE(fit_and_validate(few, s).has_value());

  std::vector<Observation> flat;
  for (std::size_t i = 0; i < 30; ++i) flat.push_back({Configuration{i % 5, 0, 0}, static_cast<double>(i % 5)});
  CHECK_FALSE(fit_and_validate(flat, s).has_value());
}

TEST_CASE("surrogate: exact quadratic is validated and reproduced") {
  SearchSpace s = grid({6, 7, 5});
  auto f = [&](const Configuration& c) {
    double x = c[0] / 5.0, y = c[1] / 6.0, z = c[2] / 4.0;
    return 3.0 + 2.0 * x - y + 0.5 * z + 4.0 * x * x + 1.5 * y * y - z * z + 0.7 * x * y - 1.2 * y * z + 0.3 * x * z;
  };
  std::vector<Observation> obs;
  for (std::uint64_t i = 0; i < 40; ++i) {
    Configuration c = s.unrank((i * 37 + 5) % s.size());
    obs.push_back({c, f(c)});
  }
  auto model = fit_and_validate(obs, s);
  REQUIRE(model.has_value());
  CHECK(model->cv_r2() > 0.999999);
  for (std::uint64_t r = 0; r < s.size(); r += 11) {
    Configuration c = s.unrank(r);
    CHECK(model->predict(c) == doctest::Approx(f(c)).epsilon(1e-9));
  }
}

TEST_CASE("surrogate: pure noise is rarely validated") {
  SearchSpace s = grid({8, 8, 10, 10, 8});
  int validated = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    placetune::util::Rng rng(seed, 3);
    std::vector<Observation> obs;
    for (int i = 0; i < 60; ++i) obs.push_back({s.unrank(rng.index(s.size())), rng.uniform(0.0, 100.0)});
    if (fit_and_validate(obs, s)) ++validated;
  }
  CHECK(validated < 10);
}

TEST_CASE("surrogate: infinite objectives are capped for fitting") {
  SearchSpace s = grid({5, 5});
  std::vector<Observation> obs;
  for (std::uint64_t r = 0; r < s.size(); ++r) {
    Configuration c = s.unrank(r);
    obs.push_back({c, c[0] == 4 ? kInf : 10.0 + c[0] + c[1]});
  }
  SurrogateOptions o;
  o.threshold = -1e9;
  auto m = fit_and_validate(obs, s, o);
  REQUIRE(m);
  CHECK(std::isfinite(m->predict({4, 4})));
}

TEST_CASE("suggest: the last unmeasured configuration") {
  SearchSpace s = grid({4, 4});
  std::vector<Observation> obs;
  MeasuredSet measured;
  for (std::uint64_t r = 0; r < s.size(); ++r) {
    if (r == 5) continue;
    obs.push_back({s.unrank(r), static_cast<double>(r)});
    measured.insert(r);
  }
  SuggestOptions o;
  o.minSamples = 2;
  for (auto kind : {ModelKind::bayesian, ModelKind::regression, ModelKind::combined}) {
    SurrogateOptions so;
    so.minSamples = 2;
    so.threshold = -1e9;
    so.folds = 3;
    auto model = fit_and_validate(obs, s, so);
    REQUIRE(model);
    auto c = suggest_next(kind, s, obs, measured, &*model, o);
    REQUIRE(c);
    CHECK(s.rank(*c) == 5);
  }
  measured.insert(5);
  CHECK_FALSE(suggest_next(ModelKind::bayesian, s, obs, measured, nullptr, o).has_value());
}

TEST_CASE("suggest: separable objective leads below the measured median") {
  SearchSpace s = grid({8, 8, 10, 10, 8});
  auto f = [](const Configuration& c) {
    double v = 0;
    const double centre[] = {2, 5, 7, 1, 6};
    for (std::size_t d = 0; d < 5; ++d) v += (c[d] - centre[d]) * (c[d] - centre[d]);
    return v;
  };
  Sampler sampler(s, SelectionKind::sobol, 0);
  MeasuredSet measured;
  std::vector<Observation> obs;
  for (int i = 0; i < 40; ++i) {
    auto c = *sampler.next(measured);
    measured.insert(s.rank(c));
    obs.push_back({c, f(c)});
  }
  std::vector<double> values;
  for (const auto& o : obs) values.push_back(o.objective);
  std::sort(values.begin(), values.end());
  const double median = values[values.size() / 2];
  auto model = fit_and_validate(obs, s);
  REQUIRE(model);
  for (auto kind : {ModelKind::bayesian, ModelKind::regression, ModelKind::combined}) {
    auto c = suggest_next(kind, s, obs, measured, &*model);
    REQUIRE(c);
    CHECK(measured.count(s.rank(*c)) == 0);
    CHECK(model->predict(*c) <= median);
    CHECK(f(*c) <= median);
    CHECK(*c == *suggest_next(kind, s, obs, measured, &*model));
  }
}

TEST_CASE("repeater: quantity") {
  CHECK(repeater_stop(RepeaterSpec::quantity(2), {1.0, 2.0}));
  CHECK_FALSE(repeater_stop(RepeaterSpec::quantity(2), {1.0}));
  CHECK(repeater_stop(RepeaterSpec::quantity(1), {kInf}));
}

TEST_CASE("repeater: student half-width") {
  auto spec = RepeaterSpec::student(10, 0.05);
  CHECK(repeater_stop(spec, {10.0, 10.0}));
  CHECK(student_relative_half_width({10.0, 20.0}) == doctest::Approx(4.2354015788106985).epsilon(1e-9));
  CHECK_FALSE(repeater_stop(spec, {10.0, 20.0}));
  CHECK(student_relative_half_width({3.0, 5.0, 4.0}) == doctest::Approx(0.6210344279298864).epsilon(1e-9));
  CHECK(student_relative_half_width({100, 101, 99, 100.5}) == doctest::Approx(0.013570691055163493).epsilon(1e-9));
  CHECK(repeater_stop(spec, {100, 101, 99, 100.5}));
  // Zero mean falls back to the absolute half-width.
  CHECK(student_relative_half_width({-1.0, 1.0}) == doctest::Approx(12.706204736432094).epsilon(1e-9));
  CHECK_FALSE(repeater_stop(spec, {10.0}));
  CHECK(repeater_stop(spec, std::vector<double>(10, 1.0)));
  std::vector<double> noisy;
  for (int i = 0; i < 10; ++i) noisy.push_back(i % 2 ? 1.0 : 100.0);
  CHECK(repeater_stop(spec, noisy));  // maxReps
}

TEST_CASE("repeater: invalid samples") {
  auto spec = RepeaterSpec::student(4, 0.05);
  CHECK(repeater_stop(spec, {kInf}));
  CHECK(repeater_stop(spec, {kInf, kInf}));
  CHECK_FALSE(repeater_stop(spec, {kInf, 10.0}));
  CHECK_FALSE(repeater_stop(spec, {kInf, 10.0, 10.0}));
  CHECK(repeater_stop(spec, {kInf, 10.0, 10.0, 10.0}));
}

TEST_CASE("repeater: model-aware relaxation") {
  auto spec = RepeaterSpec::model_aware(10, 0.05, 4.0);
  std::vector<double> samples{100, 110, 105};  // relative half-width about 0.12
  CHECK_FALSE(repeater_stop(spec, samples, false));
  CHECK(repeater_stop(spec, samples, true));
}

TEST_CASE("stop conditions") {
  StopView v;
  v.spaceSize = 100;
  v.sinceImprovement = 49;
  CHECK_FALSE(stop_fires(StopSpec::improvement(50), v));
  v.sinceImprovement = 50;
  CHECK(stop_fires(StopSpec::improvement(50), v));
  v.measured = 99;
  CHECK_FALSE(stop_fires(StopSpec::adaptive(1.0), v));
  v.measured = 100;
  CHECK(stop_fires(StopSpec::adaptive(1.0), v));
  CHECK(stop_fires(StopSpec::time(0), v));
  CHECK_FALSE(stop_fires(StopSpec::guaranteed(), v));
  v.best = 10.0;
  CHECK_FALSE(stop_fires(StopSpec::guaranteed(), v));
  v.defaultObjective = 10.0;
  CHECK_FALSE(stop_fires(StopSpec::guaranteed(), v));
  v.best = 9.0;
  CHECK(stop_fires(StopSpec::guaranteed(), v));
}

TEST_CASE("stop conditions: composition") {
  StopView v;
  v.measured = 5;
  v.spaceSize = 100;
  std::vector<StopSpec> any{StopSpec::quantity(10), StopSpec::quantity(5)};
  CHECK(should_stop(any, v) == std::optional<std::string>("quantity(5)"));
  std::vector<StopSpec> gated{StopSpec::guaranteed(true), StopSpec::quantity(5)};
  CHECK_FALSE(should_stop(gated, v).has_value());
  v.best = 1.0;
  v.defaultObjective = 2.0;
  CHECK(should_stop(gated, v).has_value());
  CHECK_FALSE(should_stop({}, v).has_value());
}

TEST_CASE("experiment: one-point space") {
  SearchSpace s({{"only", {42.0}}});
  ScriptedEvaluator ev([](const EvalRequest&) { return valid_sample(7.0); });
  TunerSettings t;
  auto r = run_experiment(t, s, ev);
  REQUIRE(r.best);
  CHECK(*r.best == Configuration{0});
  CHECK(r.log.size() == 1);
  CHECK(r.stopReason == "exhausted");
  CHECK(r.evaluations == 2);
}

TEST_CASE("experiment: quantity stop measures exactly n distinct configurations") {
  SearchSpace s = grid({8, 8, 10});
  for (std::size_t workers : {1u, 3u}) {
    ScriptedEvaluator ev([&](const EvalRequest& r) { return valid_sample(100.0 + s.rank(r.config) % 17); });
    TunerSettings t;
    t.stopConditions = {StopSpec::quantity(37)};
    t.repeater = RepeaterSpec::quantity(1);
    t.workers = workers;
    auto r = run_experiment(t, s, ev);
    CHECK(r.log.size() == 37);
    std::set<std::uint64_t> ranks;
    for (const auto& m : r.log) ranks.insert(s.rank(m.config));
    CHECK(ranks.size() == 37);
  }
}

TEST_CASE("experiment: improvement(50) fires on the 50th non-improving configuration") {
  SearchSpace s = grid({8, 8, 10, 10, 8});
  // The third measured configuration is the best; everything later is worse.
  std::map<std::uint64_t, int> order;
  ScriptedEvaluator ev([&](const EvalRequest& r) {
    auto k = order.emplace(s.rank(r.config), static_cast<int>(order.size())).first->second;
    return valid_sample(k == 2 ? 1.0 : 100.0 + k);
  });
  TunerSettings t;
  t.repeater = RepeaterSpec::quantity(1);
  t.stopConditions = {StopSpec::improvement(50)};
  auto r = run_experiment(t, s, ev);
  CHECK(r.log.size() == 3 + 50);
  CHECK(r.stopReason == "improvement(50)");
  CHECK(r.bestObjective == 1.0);
}

TEST_CASE("experiment: adaptive(1.0) stops exactly at full coverage") {
  SearchSpace s = grid({3, 4});
  ScriptedEvaluator ev([&](const EvalRequest& r) { return valid_sample(static_cast<double>(s.rank(r.config))); });
  TunerSettings t;
  t.repeater = RepeaterSpec::quantity(1);
  t.stopConditions = {StopSpec::adaptive(1.0)};
  auto r = run_experiment(t, s, ev);
  CHECK(r.log.size() == 12);
  CHECK(r.stopReason == "adaptive(1)");
}

TEST_CASE("experiment: time(0) stops after the first batch") {
  SearchSpace s = grid({4, 4});
  ScriptedEvaluator ev([](const EvalRequest&) { return valid_sample(1.0); });
  TunerSettings t;
  t.workers = 3;
  t.stopConditions = {StopSpec::time(0)};
  auto r = run_experiment(t, s, ev);
  CHECK(r.log.size() == 3);
  CHECK(r.stopReason == "time(0)");
}

TEST_CASE("experiment: guaranteed waits until the default is beaten") {
  SearchSpace s = grid({5, 5});
  ScriptedEvaluator ev([&](const EvalRequest& r) {
    double v = 50.0 - static_cast<double>(r.config[0] + r.config[1]);
    return valid_sample(v);
  });
  TunerSettings t;
  t.repeater = RepeaterSpec::quantity(1);
  t.defaultConfiguration = std::map<std::string, double>{{"p0", 3.0}, {"p1", 3.0}};
  t.stopConditions = {StopSpec::guaranteed()};
  auto r = run_experiment(t, s, ev);
  REQUIRE(!r.log.empty());
  CHECK(r.log.front().config == Configuration{3, 3});
  CHECK(r.bestObjective < 44.0);
  for (std::size_t i = 0; i + 1 < r.log.size(); ++i) CHECK(r.log[i].objective >= 44.0);
}

TEST_CASE("experiment: failures are recorded and the run continues") {
  SearchSpace s = grid({4, 4});
  ScriptedEvaluator ev([&](const EvalRequest& r) {
    if (r.config[0] == 0) {
      Sample f;
      f.failed = true;
      return f;
    }
    return valid_sample(10.0 + r.config[0]);
  });
  TunerSettings t;
  t.stopConditions = {StopSpec::adaptive(1.0)};
  auto r = run_experiment(t, s, ev);
  CHECK(r.log.size() == 16);
  int invalid = 0;
  for (const auto& m : r.log) invalid += m.valid() ? 0 : 1;
  CHECK(invalid == 4);
  CHECK(r.bestObjective == 11.0);
}

TEST_CASE("experiment: repetition seeds, monotone best and deterministic report") {
  SearchSpace s = solver_search_space();
  synthetic::GridObjective f(s);
  TunerSettings t;
  t.seed = 5;
  synthetic::GridEvaluator a(f), b(f);
  auto ra = run_experiment(t, s, a);
  auto rb = run_experiment(t, s, b);
  CHECK(report_csv(ra, s) == report_csv(rb, s));
  std::set<std::uint64_t> ranks;
  double best = kInf;
  for (const auto& m : ra.log) {
    CHECK(ranks.insert(s.rank(m.config)).second);
    CHECK(m.samples.size() == 2);
    best = std::min(best, m.objective);
  }
  CHECK(best == ra.bestObjective);
  CHECK(ra.modelUsed);
  CHECK(repetition_seed(5, 10, 0) != repetition_seed(5, 10, 1));
  CHECK(repetition_seed(5, 10, 0) != repetition_seed(6, 10, 0));
}

TEST_CASE("experiment: report layout") {
  SearchSpace s({{"a", {1.5, 2.5}}});
  ScriptedEvaluator ev([](const EvalRequest& r) { return r.config[0] == 0 ? valid_sample(3.0, 0.5) : Sample{}; });
  TunerSettings t;
  t.repeater = RepeaterSpec::quantity(1);
  t.stopConditions = {StopSpec::adaptive(1.0)};
  auto r = run_experiment(t, s, ev);
  std::string csv = report_csv(r, s);
  CHECK(csv.rfind("iteration,a,repetitions,mean_objective,valid,elapsed_s\n", 0) == 0);
  CHECK(csv.find("\n# best_configuration,a=1.5\n") != std::string::npos);
  CHECK(csv.find("inf,0,") != std::string::npos);
  CHECK(csv.find("# stop_reason,adaptive(1)\n") != std::string::npos);
}

TEST_CASE("settings: parse, round trip and errors") {
  auto s = parse_settings_text(R"({"selection":"sobol","model":"bayesian",
    "repeater":{"type":"quantity","count":2},
    "stopConditions":[{"type":"improvement","value":50}],
    "perEvalTimeLimit":10,"productionTimeLimit":900,"seed":4})");
  CHECK(s.selection == SelectionKind::sobol);
  CHECK(s.model == ModelKind::bayesian);
  CHECK(s.repeater.count == 2);
  REQUIRE(s.stopConditions.size() == 1);
  CHECK(s.stopConditions[0].kind == StopSpec::Kind::improvement);
  CHECK(s.perEvalTimeLimit == 10.0);
  CHECK(s.productionTimeLimit == 900.0);
  auto again = parse_settings_text(to_settings_text(s));
  CHECK(to_settings_text(again) == to_settings_text(s));
  CHECK_THROWS_AS(parse_settings_text(R"({"stopConditions":[]})"), SettingsError);
  CHECK_THROWS_AS(parse_settings_text(R"({"perEvalTimeLimit":0})"), SettingsError);
  CHECK_THROWS_AS(parse_settings_text(R"({"model":"forest"})"), SettingsError);
  CHECK_THROWS_AS(parse_settings_text(R"({"repeater":{"type":"quantity","count":"two"}})"), SettingsError);
}

TEST_CASE("experiment: top percent of a synthetic grid within the evaluation cap") {
  SearchSpace s = solver_search_space();
  synthetic::GridObjective f(s);
  const double top = f.quantile(0.01);
  int hits = 0;
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    TunerSettings t;
    t.seed = seed;
    synthetic::GridEvaluator ev(f);
    auto r = run_experiment(t, s, ev);
    if (r.best && f.value(*r.best) <= top && ev.calls <= 400) ++hits;
  }
  CHECK(hits >= 4);
}
