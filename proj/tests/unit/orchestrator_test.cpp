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


#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "placetune/ilp/exact.hpp"
#include "placetune/model/scenario_io.hpp"
#include "placetune/orchestrator/coordinator.hpp"
#include "placetune/orchestrator/fault_sim.hpp"
#include "placetune/orchestrator/protocol.hpp"
#include "placetune/orchestrator/task_board.hpp"
#include "placetune/orchestrator/worker.hpp"
#include "placetune/util/random.hpp"

using namespace placetune;
using namespace placetune::orchestrator;

namespace {

TaskMsg task(std::uint64_t id, double timeLimit = 10.0) {
  TaskMsg t;
  t.taskId = id;
  t.timeLimit = timeLimit;
  return t;
}

ResultMsg result(std::uint64_t id, const std::string& worker) {
  ResultMsg r;
  r.taskId = id;
  r.workerId = worker;
  r.valid = true;
  return r;
}

std::string random_text(util::Rng& rng) {
  static const std::vector<std::string> pieces = {"a", "b", "X", "0", " ", "_", ":", "\"", "\\", "/", "{", "}",
                                                  "\n", "\t", "\xc3\xa9", "\xe2\x9c\x97"};
  std::string s;
  const std::size_t n = rng.index(12);
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng.index(pieces.size())];
  return s;
}

double random_double(util::Rng& rng) {
  switch (rng.index(4)) {
    case 0: return 0.0;
    case 1: return static_cast<double>(rng.index(1000));
    case 2: return rng.uniform(-1e6, 1e6);
    default: return rng.uniform() * 1e-9;
  }
}

Message random_message(util::Rng& rng) {
  switch (rng.index(6)) {
    case 0: return HelloMsg{random_text(rng)};
    case 1: return HeartbeatMsg{random_text(rng)};
    case 2: {
      TaskMsg t;
      t.taskId = rng.next();
      t.scenarioPath = random_text(rng);
      t.scenarioInline = random_text(rng);
      for (std::size_t i = rng.index(4); i > 0; --i) t.configuration[random_text(rng)] = random_double(rng);
      t.timeLimit = random_double(rng);
      t.repetitionIndex = rng.index(10);
      t.seed = rng.next();
      t.virtualClock = rng.chance(0.5);
      t.evaluationsPerSecond = random_double(rng);
      return t;
    }
    case 3: {
      ResultMsg r;
      r.taskId = rng.next();
      r.status = rng.chance(0.5) ? ResultStatus::ok : ResultStatus::failed;
      r.valid = rng.chance(0.5);
      r.softScore = random_double(rng);
      r.hardScore = static_cast<std::int64_t>(rng.index(100));
      if (rng.chance(0.5)) r.firstValidAt = random_double(rng);
      if (rng.chance(0.5)) r.lastImprovementAt = random_double(rng);
      r.solverSeconds = random_double(rng);
      r.workerId = random_text(rng);
      r.wallSeconds = random_double(rng);
      r.error = random_text(rng);
      return r;
    }
    case 4: return CancelMsg{rng.next()};
    default: return ByeMsg{random_text(rng), random_text(rng)};
  }
}

}  // namespace

TEST_CASE("protocol round trip for every message kind") {
  ResultMsg r = result(7, "w1");
  r.firstValidAt = 0.25;
  r.softScore = 1234.5;
  TaskMsg t = task(3);
  t.configuration = {{"neighborhoodSize", 50.0}, {"softScoreStartingTemperature", 100.0}};
  t.scenarioPath = "scenarios/small.json";
  std::vector<Message> all = {HelloMsg{"w1"}, HeartbeatMsg{"w1"}, t, r, CancelMsg{3}, ByeMsg{"w1", "done"}};
  std::set<std::string> kinds;
  for (const auto& m : all) {
    const std::string line = encode(m);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"proto\":\"placetune/1\"") != std::string::npos);
    CHECK(decode(line) == m);
    CHECK(encode(decode(line)) == line);
    kinds.insert(kind_name(m));
  }
  CHECK(kinds == std::set<std::string>{"hello", "heartbeat", "task", "result", "cancel", "bye"});
}

TEST_CASE("protocol fuzz: random messages survive encode/decode") {
  util::Rng rng(2026, 1);
  for (int i = 0; i < 2000; ++i) {
    Message m = random_message(rng);
    const std::string line = encode(m);
    REQUIRE(line.find('\n') == std::string::npos);
    CHECK(decode(line) == m);
    CHECK(encode(decode(line)) == line);
  }
}

TEST_CASE("protocol rejects malformed lines") {
  CHECK_THROWS_AS(decode(""), ProtocolError);
  CHECK_THROWS_AS(decode("not json"), ProtocolError);
  CHECK_THROWS_AS(decode("[1,2]"), ProtocolError);
  CHECK_THROWS_AS(decode(R"({"proto":"placetune/2","kind":"hello","workerId":"w"})"), ProtocolError);
  CHECK_THROWS_AS(decode(R"({"proto":"placetune/1","kind":"shout","workerId":"w"})"), ProtocolError);
  CHECK_THROWS_AS(decode(R"({"proto":"placetune/1","kind":"cancel","taskId":"x"})"), ProtocolError);
  CHECK_THROWS_AS(decode(R"({"proto":"placetune/1","kind":"hello"})"), ProtocolError);
  const std::string good = encode(HeartbeatMsg{"w"});
  util::Rng rng(5, 2);
  for (int i = 0; i < 500; ++i) {
    std::string cut = good.substr(0, rng.index(good.size()));
    CHECK_THROWS_AS(decode(cut), ProtocolError);
  }
}

TEST_CASE("dispatch: one task, one idle worker") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  b.submit(task(1));
  auto a = b.dispatch(0.0);
  REQUIRE(a.size() == 1);
  CHECK(a[0].workerId == "w1");
  CHECK(a[0].task.taskId == 1);
  CHECK(b.queued() == 0);
  CHECK(b.workers().at("w1").state == WorkerState::busy);
}

TEST_CASE("dispatch: three tasks, two workers") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  b.add_worker("w2", 0.0);
  for (std::uint64_t i = 1; i <= 3; ++i) b.submit(task(i));
  auto a = b.dispatch(0.0);
  REQUIRE(a.size() == 2);
  CHECK(a[0].task.taskId == 1);
  CHECK(a[1].task.taskId == 2);
  CHECK(b.queued() == 1);
  CHECK(b.dispatch(0.5).empty());
  CHECK(b.on_result(result(1, "w1"), 1.0) == ResultDisposition::accepted);
  auto next = b.dispatch(1.0);
  REQUIRE(next.size() == 1);
  CHECK(next[0].workerId == "w1");
  CHECK(next[0].task.taskId == 3);
}

TEST_CASE("dispatch without workers keeps tasks queued") {
  TaskBoard b;
  b.submit(task(1));
  CHECK(b.dispatch(0.0).empty());
  CHECK(b.queued() == 1);
  CHECK_THROWS_AS(b.submit(task(1)), std::invalid_argument);
}

TEST_CASE("heartbeat sweep: recent heartbeat stays live, long silence is dead") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  b.heartbeat("w1", 9.0);
  auto s = b.sweep(10.0);
  CHECK(s.died.empty());
  CHECK(b.workers().at("w1").state != WorkerState::dead);

  TaskBoard c;
  c.add_worker("w1", 0.0);
  c.add_worker("w2", 0.0);
  c.submit(task(1, 100.0));
  auto a = c.dispatch(0.0);
  REQUIRE(a.size() == 1);
  c.heartbeat("w2", 10.0);
  auto swept = c.sweep(11.0);
  CHECK(swept.died == std::vector<std::string>{"w1"});
  CHECK(swept.requeued == std::vector<std::uint64_t>{1});
  CHECK(c.workers().at("w1").state == WorkerState::dead);
  CHECK_FALSE(c.workers().at("w1").task.has_value());

  auto again = c.dispatch(11.0);
  REQUIRE(again.size() == 1);
  CHECK(again[0].workerId == "w2");
  CHECK(c.on_result(result(1, "w2"), 12.0) == ResultDisposition::accepted);
  // The dead worker's late answer is discarded.
  CHECK(c.on_result(result(1, "w1"), 13.0) == ResultDisposition::duplicate);
  auto done = c.take_completed();
  REQUIRE(done.size() == 1);
  CHECK(done[0].workerId == "w2");
  CHECK(c.idle());
}

TEST_CASE("duplicate results are discarded and logged") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  b.submit(task(1));
  b.dispatch(0.0);
  CHECK(b.on_result(result(1, "w1"), 1.0) == ResultDisposition::accepted);
  CHECK(b.on_result(result(1, "w1"), 1.1) == ResultDisposition::duplicate);
  CHECK(b.duplicates_discarded() == 1);
  CHECK(b.take_completed().size() == 1);
  const auto& ev = b.events();
  CHECK(std::any_of(ev.begin(), ev.end(), [](const BoardEvent& e) {
    return e.text.find("duplicate result for task 1") != std::string::npos;
  }));
  CHECK(b.on_result(result(9, "w1"), 2.0) == ResultDisposition::unknown);
}

TEST_CASE("overrun tasks fail and are cancelled") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  b.submit(task(1, 10.0));
  b.dispatch(0.0);
  b.heartbeat("w1", 10.5);
  CHECK(b.sweep(10.9).failed.empty());
  b.heartbeat("w1", 11.0);
  auto s = b.sweep(11.2);
  CHECK(s.failed == std::vector<std::uint64_t>{1});
  REQUIRE(s.cancels.size() == 1);
  CHECK(s.cancels[0].workerId == "w1");
  auto done = b.take_completed();
  REQUIRE(done.size() == 1);
  CHECK(done[0].status == ResultStatus::failed);
  CHECK(b.on_result(result(1, "w1"), 12.0) == ResultDisposition::duplicate);
  CHECK(b.workers().at("w1").state == WorkerState::idle);
}

TEST_CASE("tasks fail after the attempt limit") {
  BoardConfig cfg;
  cfg.maxAttempts = 2;
  TaskBoard b(cfg);
  b.submit(task(1, 100.0));
  for (int i = 0; i < 2; ++i) {
    const std::string id = "w" + std::to_string(i);
    b.add_worker(id, 20.0 * i);
    REQUIRE(b.dispatch(20.0 * i).size() == 1);
    b.remove_worker(id, 20.0 * i + 1.0);
  }
  CHECK(b.attempts(1) == 2);
  auto done = b.take_completed();
  REQUIRE(done.size() == 1);
  CHECK(done[0].status == ResultStatus::failed);
  CHECK(b.idle());
}

TEST_CASE("worker_run on the trivial scenario matches the oracle") {
  TaskMsg t = task(1, 1.0);
  t.scenarioInline = model::to_scenario_text(fixtures::trivial());
  t.virtualClock = true;
  t.seed = 3;
  ResultMsg r = worker_run(t, "w");
  CHECK(r.status == ResultStatus::ok);
  CHECK(r.valid);
  model::Instance inst(fixtures::trivial());
  auto opt = ilp::exact_solve(inst);
  REQUIRE(opt.status == ilp::ExactStatus::optimal);
  CHECK(r.softScore == doctest::Approx(opt.objective).epsilon(1e-12));
  CHECK(r.workerId == "w");
}

TEST_CASE("worker_run on a scenario without requests") {
  model::Scenario s = fixtures::trivial();
  s.requests.clear();
  TaskMsg t = task(2, 1.0);
  t.scenarioInline = model::to_scenario_text(s);
  t.virtualClock = true;
  ResultMsg r = worker_run(t, "w");
  CHECK(r.valid);
  CHECK(r.softScore == 0.0);
  REQUIRE(r.firstValidAt.has_value());
  CHECK(*r.firstValidAt < 1e-3);
}

TEST_CASE("worker_run replay is identical apart from worker and wall time") {
  TaskMsg t = task(5, 0.2);
  t.scenarioInline = model::to_scenario_text(fixtures::chain(3, 4, 2.5));
  t.virtualClock = true;
  t.seed = 77;
  t.configuration = {{"neighborhoodSize", 10.0}, {"hardScoreStartingTemperature", 50.0}};
  ResultMsg a = worker_run(t, "alpha");
  ResultMsg b = worker_run(t, "beta");
  b.workerId = a.workerId;
  b.wallSeconds = a.wallSeconds;
  CHECK(a == b);
  CHECK(a.solverSeconds == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("worker_run reports unloadable scenarios as failed") {
  TaskMsg t = task(9, 0.1);
  t.scenarioPath = "/nonexistent/scenario.json";
  ResultMsg r = worker_run(t, "w");
  CHECK(r.status == ResultStatus::failed);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("simulated-failure harness: 100 randomized runs without violations") {
  std::set<SimBehaviour> seen;
  std::size_t duplicates = 0, deaths = 0, requeues = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    FaultSimReport rep = simulate_faults(seed);
    INFO("seed " << seed << ": " << (rep.violations.empty() ? "" : rep.violations.front()));
    CHECK(rep.ok());
    CHECK(rep.accepted + rep.failedByBoard == rep.tasks);
    seen.insert(rep.behaviours.begin(), rep.behaviours.end());
    duplicates += rep.duplicatesDiscarded;
    deaths += rep.deaths;
    requeues += rep.requeues;
  }
  CHECK(seen.size() == 6);
  CHECK(duplicates > 0);
  CHECK(deaths > 0);
  CHECK(requeues > 0);
}

TEST_CASE("simulated-failure harness is deterministic") {
  FaultSimReport a = simulate_faults(42);
  FaultSimReport b = simulate_faults(42);
  CHECK(a.accepted == b.accepted);
  CHECK(a.finishedAt == b.finishedAt);
  CHECK(a.duplicatesDiscarded == b.duplicatesDiscarded);
}

namespace {

CoordinatorOptions fast_options() {
  CoordinatorOptions o;
  o.board.heartbeatTimeout = 1.0;
  o.noWorkerTimeout = 5.0;
  return o;
}

std::vector<TaskMsg> trivial_tasks(Coordinator& c, std::size_t n) {
  std::vector<TaskMsg> out;
  const std::string text = model::to_scenario_text(fixtures::trivial());
  for (std::size_t i = 0; i < n; ++i) {
    TaskMsg t = task(c.next_task_id(), 0.05);
    t.scenarioInline = text;
    t.virtualClock = true;
    t.seed = i;
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("local worker pool completes a batch") {
  LocalWorkerPool pool(3, fast_options(), {}, 0.1);
  auto tasks = trivial_tasks(pool.coordinator(), 7);
  auto results = pool.coordinator().run(tasks);
  REQUIRE(results.size() == 7);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].taskId == tasks[i].taskId);
    CHECK(results[i].status == ResultStatus::ok);
    CHECK(results[i].valid);
  }
}

TEST_CASE("local worker pool survives crash, silence and duplicates") {
  FaultPlan crash;
  crash.crashOnTask = 1;
  FaultPlan silent;
  silent.silentAfterTasks = 1;
  FaultPlan dup;
  dup.duplicateResults = true;
  LocalWorkerPool pool(4, fast_options(), {FaultPlan{}, crash, silent, dup}, 0.1);
  auto tasks = trivial_tasks(pool.coordinator(), 12);
  auto results = pool.coordinator().run(tasks);
  REQUIRE(results.size() == tasks.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].taskId == tasks[i].taskId);
    CHECK(results[i].status == ResultStatus::ok);
  }
  // Stale duplicates may still be in flight; let them land.
  pool.coordinator().pump(0.3);
  const auto& board = pool.coordinator().board();
  CHECK(board.idle());
  CHECK(board.workers().at("local-1").state == WorkerState::dead);
}

TEST_CASE("orchestrated and direct evaluators agree under the virtual clock") {
  tuner::SearchSpace space = tuner::solver_search_space();
  EvaluationTarget target;
  target.scenarioInline = model::to_scenario_text(fixtures::chain(3, 3, 2.5));
  target.timeLimit = 0.05;
  std::vector<tuner::EvalRequest> reqs;
  for (std::size_t i = 0; i < 4; ++i) {
    tuner::Configuration c = space.unrank(i * 977);
    reqs.push_back({c, i % 2, tuner::repetition_seed(11, space.rank(c), i % 2)});
  }
  DirectEvaluator direct(space, target);
  LocalWorkerPool pool(2, fast_options(), {}, 0.1);
  OrchestratedEvaluator remote(pool.coordinator(), space, target);
  auto a = direct.evaluate_batch(reqs);
  auto b = remote.evaluate_batch(reqs);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].valid == b[i].valid);
    CHECK(a[i].softScore == b[i].softScore);
    CHECK(a[i].seconds == b[i].seconds);
    CHECK(a[i].firstValidAt == b[i].firstValidAt);
  }
}

TEST_CASE("socket transport carries a batch end to end") {
  Listener listener(0);
  WorkerHub hub;
  Coordinator coord(hub, fast_options());
  std::thread worker([port = listener.port()] {
    auto ch = connect_to("127.0.0.1", port);
    WorkerOptions opts;
    opts.workerId = "remote";
    opts.heartbeatInterval = 0.1;
    serve_worker(*ch, opts);
  });
  auto conn = listener.accept(5.0);
  REQUIRE(conn != nullptr);
  hub.attach(conn);
  while (coord.live_workers() == 0) coord.pump(0.01);
  auto tasks = trivial_tasks(coord, 3);
  auto results = coord.run(tasks);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    CHECK(r.status == ResultStatus::ok);
    CHECK(r.workerId == "remote");
  }
  hub.broadcast_bye();
  worker.join();
  hub.shutdown();
}

TEST_CASE("virtual-clock tasks are not failed on wall-time overrun") {
  TaskBoard b;
  b.add_worker("w1", 0.0);
  TaskMsg t = task(1, 1.0);
  t.virtualClock = true;
  b.submit(t);
  b.dispatch(0.0);
  b.heartbeat("w1", 5.0);
  CHECK(b.sweep(5.0).failed.empty());
  CHECK(b.outstanding() == 1);
}
