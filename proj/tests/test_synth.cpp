#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lifemetrics/config.hpp"
#include "lifemetrics/engine.hpp"
#include "lifemetrics/log_io.hpp"
#include "lifemetrics/synth.hpp"

using namespace lifemetrics;

namespace {

TaskKey A() { return task_key_from_token("TaskA"); }
TaskKey B() { return task_key_from_token("TaskB"); }

LearnerProfile two_task_profile() {
  LearnerProfile profile;
  profile.tasks[A()] = {100.0, 0.08, 10.0, 0.0};
  profile.tasks[B()] = {80.0, 0.06, 5.0, 0.0};
  return profile;
}

ScenarioSpec bracketed_scenario() {
  ScenarioSpec spec;
  spec.lifetime_id = "fixture";
  spec.blocks = {
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
      {BlockType::learn, {{A(), 60}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
      {BlockType::learn, {{B(), 60}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
  };
  return spec;
}

// Two alternating rounds with gentle learning rates, so transfer bumps stay
// inside the per-task clamp bounds instead of saturating against them. The
// initial evaluation block is wide enough that the pre-learning cluster
// fills the bottom clamp decile on noise-free data.
ScenarioSpec alternating_scenario() {
  ScenarioSpec spec;
  spec.lifetime_id = "fixture-alt";
  spec.blocks = {
      {BlockType::eval, {{A(), 40}, {B(), 40}}},
      {BlockType::learn, {{A(), 100}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
      {BlockType::learn, {{B(), 100}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
      {BlockType::learn, {{A(), 100}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
      {BlockType::learn, {{B(), 100}}},
      {BlockType::eval, {{A(), 10}, {B(), 10}}},
  };
  return spec;
}

LearnerProfile gentle_profile() {
  LearnerProfile profile;
  profile.tasks[A()] = {100.0, 0.03, 10.0, 0.0};
  profile.tasks[B()] = {80.0, 0.025, 5.0, 0.0};
  return profile;
}

std::optional<double> metric_of(const std::vector<MetricResult>& results,
                                std::string_view id) {
  for (const MetricResult& m : results) {
    if (m.name == id) return m.value;
  }
  return std::nullopt;
}

std::vector<MetricResult> run_engine(const ScenarioSpec& spec,
                                     const LearnerProfile& profile) {
  const LifetimeLog log = generate_lifetime(spec, profile);
  const SteStore ste = generate_ste_store(spec, profile);
  const PreprocessedLog pre = preprocess(log, ste, PreprocessConfig{});
  return compute_all_metrics(pre);
}

}  // namespace

TEST_CASE("generation is deterministic, including the noise stream") {
  LearnerProfile profile = two_task_profile();
  profile.noise_std = 1.5;
  profile.seed = 99;
  const ScenarioSpec spec = bracketed_scenario();
  const LifetimeLog one = generate_lifetime(spec, profile);
  const LifetimeLog two = generate_lifetime(spec, profile);
  CHECK(one == two);
  std::ostringstream s1, s2;
  write_log(s1, one);
  write_log(s2, two);
  CHECK(s1.str() == s2.str());

  profile.seed = 100;
  const LifetimeLog three = generate_lifetime(spec, profile);
  CHECK_FALSE(one == three);
}

TEST_CASE("generated logs parse back identically") {
  LearnerProfile profile = two_task_profile();
  profile.noise_std = 0.7;
  const ScenarioSpec spec = bracketed_scenario();
  const LifetimeLog log = generate_lifetime(spec, profile);
  std::ostringstream out;
  write_log(out, log);
  std::istringstream in(out.str());
  CHECK(parse_log(in, spec.perf_key) == log);
}

TEST_CASE("the growth law approaches the asymptote and carries across blocks") {
  LearnerProfile profile;
  profile.tasks[A()] = {10.0, 0.5, 2.0, 0.0};
  ScenarioSpec spec;
  spec.blocks = {{BlockType::learn, {{A(), 5}}},
                 {BlockType::learn, {{A(), 5}}}};
  const LifetimeLog log = generate_lifetime(spec, profile);
  // First value is the entry mastery; the curve then rises toward 10.
  CHECK(log.perf(0) == 2.0);
  for (std::size_t i = 1; i < 10; ++i) {
    CHECK(log.perf(i) > log.perf(i - 1));
    CHECK(log.perf(i) < 10.0);
  }
  // Adjacent same-task blocks continue one curve: the second block's first
  // value extends the law rather than restarting it.
  const double expected = 10.0 - (10.0 - 2.0) * std::exp(-0.5 * 5.0);
  CHECK(log.perf(5) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("a no-op learner yields zero transfer and maintenance exactly") {
  LearnerProfile profile;
  profile.tasks[A()] = {50.0, 0.1, 50.0, 0.0};  // asymptote == start
  profile.tasks[B()] = {30.0, 0.1, 30.0, 0.0};
  const auto results = run_engine(bracketed_scenario(), profile);
  CHECK(*metric_of(results, kPerformanceMaintenance) == 0.0);
  CHECK(*metric_of(results, kForwardTransfer) == 0.0);
  CHECK(*metric_of(results, kBackwardTransfer) == 0.0);
  CHECK(*metric_of(results, kCumulativeGain) == 0.0);
}

TEST_CASE("positive transfer produces the rising-evaluation regime") {
  LearnerProfile profile = gentle_profile();
  profile.transfer[{A(), B()}] = 0.1;
  profile.transfer[{B(), A()}] = 0.1;
  const auto results = run_engine(alternating_scenario(), profile);
  CHECK(*metric_of(results, kPerformanceMaintenance) > 0.0);
  CHECK(*metric_of(results, kForwardTransfer) > 0.0);
  CHECK(*metric_of(results, kBackwardTransfer) > 0.0);
}

TEST_CASE("forgetting produces the decaying-evaluation regime") {
  LearnerProfile profile = two_task_profile();
  profile.tasks[A()].forgetting = 0.02;
  profile.tasks[B()].forgetting = 0.02;
  const auto results = run_engine(bracketed_scenario(), profile);
  CHECK(*metric_of(results, kPerformanceMaintenance) < 0.0);
  CHECK(*metric_of(results, kBackwardTransfer) < 0.0);
}

TEST_CASE("identical lifetime and expert curves give RP and SE of one") {
  LearnerProfile profile;
  profile.tasks[A()] = {60.0, 0.12, 6.0, 0.0};
  ScenarioSpec spec;
  spec.blocks = {{BlockType::learn, {{A(), 80}}}};
  spec.ste = {{A(), 80}};
  const auto results = run_engine(spec, profile);
  CHECK(*metric_of(results, kRelativePerformance) == 1.0);
  CHECK(*metric_of(results, kSampleEfficiency) == 1.0);
}

TEST_CASE("increasing a transfer coefficient never lowers that pair's FT") {
  double previous = -1.0;
  for (double coef : {0.0, 0.2, 0.4, 0.8}) {
    LearnerProfile profile = two_task_profile();
    profile.transfer[{A(), B()}] = coef;
    const auto results = run_engine(bracketed_scenario(), profile);
    const auto ft = metric_of(results, kForwardTransfer);
    REQUIRE(ft.has_value());
    CHECK(*ft >= previous);
    previous = *ft;
  }
}

TEST_CASE("the oracle agrees with the engine on noise-free fixtures") {
  LearnerProfile profile = two_task_profile();
  profile.transfer[{A(), B()}] = 0.3;
  profile.tasks[A()].forgetting = 0.01;
  ScenarioSpec spec = bracketed_scenario();
  spec.ste = {{A(), 90}, {B(), 90}};
  const auto expected = expected_values(spec, profile, PreprocessConfig{});
  const auto results = run_engine(spec, profile);
  for (const MetricResult& m : results) {
    const auto& want = expected.at(m.name);
    REQUIRE(want.has_value() == m.value.has_value());
    if (want) {
      CHECK(*m.value ==
            doctest::Approx(*want).epsilon(1e-9));
    }
  }
}

TEST_CASE("the oracle refuses noisy profiles") {
  LearnerProfile profile = two_task_profile();
  profile.noise_std = 0.5;
  CHECK_THROWS_AS(
      expected_values(bracketed_scenario(), profile, PreprocessConfig{}),
      std::invalid_argument);
}

TEST_CASE("profiles and scenarios load from key-value text") {
  const auto profile = profile_from_kv(read_kv_text(
      "seed = 7\n"
      "noise_std = 0.25\n"
      "task = TaskA asymptote=100 learn_rate=0.05 start=10 forgetting=0.01\n"
      "task = TaskB#hard asymptote=50 learn_rate=0.1 start=0\n"
      "transfer = TaskA TaskB#hard 0.4\n"));
  CHECK(profile.seed == 7);
  CHECK(profile.noise_std == 0.25);
  REQUIRE(profile.tasks.count(task_key_from_token("TaskB#hard")) == 1);
  CHECK(profile.tasks.at(A()).forgetting == 0.01);
  CHECK(profile.transfer.at({A(), task_key_from_token("TaskB#hard")}) == 0.4);

  const auto spec = scenario_from_kv(read_kv_text(
      "lifetime_id = demo\n"
      "perf_key = score\n"
      "block = eval TaskA:10 TaskB#hard:10\n"
      "block = learn TaskA:100\n"
      "ste = TaskA 50\n"));
  CHECK(spec.lifetime_id == "demo");
  CHECK(spec.perf_key == "score");
  REQUIRE(spec.blocks.size() == 2);
  CHECK(spec.blocks[0].type == BlockType::eval);
  CHECK(spec.blocks[0].segments[1].task == task_key_from_token("TaskB#hard"));
  CHECK(spec.ste.size() == 1);

  CHECK_THROWS_AS(profile_from_kv(read_kv_text("task = TaskA asymptote=1\n")),
                  std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_kv(read_kv_text("lifetime_id = x\n")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      profile_from_kv(read_kv_text(
          "task = TaskA asymptote=1 learn_rate=1 start=0\n"
          "transfer = TaskA Ghost 0.5\n")),
      std::invalid_argument);
}

TEST_CASE("variant labels survive the token round trip") {
  const TaskKey key = task_key_from_token("Nav#night");
  CHECK(key.name == "Nav");
  CHECK(key.variant == "variant=night");
  const nlohmann::json params = task_params_for(key);
  CHECK(params.at("variant") == "night");
  CHECK(canonical_variant(params) == key.variant);
}
