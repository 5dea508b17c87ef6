// Acceptance suite: one pass/fail line per criterion.
//
//   1. engine == expected-values oracle on noise-free fixtures (1e-9 rel)
//   2. figure-regime signs (transfer up / forgetting down)
//   3. exact identities (RP/SE = 1, PM/FT/BT = 0)
//   4. contrast properties over 10^4 random positive pairs
//   5. Theil-Sen vs brute force + outlier robustness
//   6. normalization pipeline (range, window rule, step order)
//   7. recovery-time edge rules
//   8. CLI end-to-end determinism and clone aggregation
//
// argv[1] is the CLI binary (criterion 8).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lifemetrics/engine.hpp"
#include "lifemetrics/log_io.hpp"
#include "lifemetrics/report.hpp"
#include "lifemetrics/supplemental.hpp"
#include "lifemetrics/synth.hpp"

using namespace lifemetrics;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void criterion(int number, const std::string& name, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number,
              name.c_str());
  if (!ok) {
    ++g_failures;
    for (const std::string& note : g_notes) {
      std::printf("       %s\n", note.c_str());
    }
  }
  g_notes.clear();
}

void note(const std::string& text) { g_notes.push_back(text); }

TaskKey tk(const char* token) { return task_key_from_token(token); }

struct Fixture {
  std::string name;
  ScenarioSpec spec;
  LearnerProfile profile;
};

LearnerProfile plain_profile() {
  LearnerProfile p;
  p.tasks[tk("TaskA")] = {100.0, 0.03, 10.0, 0.0};
  p.tasks[tk("TaskB")] = {80.0, 0.025, 5.0, 0.0};
  return p;
}

ScenarioSpec bracketed(std::size_t first_eb = 40, std::size_t eb = 10,
                       std::size_t lb = 100) {
  ScenarioSpec s;
  s.blocks = {
      {BlockType::eval, {{tk("TaskA"), first_eb}, {tk("TaskB"), first_eb}}},
      {BlockType::learn, {{tk("TaskA"), lb}}},
      {BlockType::eval, {{tk("TaskA"), eb}, {tk("TaskB"), eb}}},
      {BlockType::learn, {{tk("TaskB"), lb}}},
      {BlockType::eval, {{tk("TaskA"), eb}, {tk("TaskB"), eb}}},
  };
  return s;
}

ScenarioSpec alternating(bool with_ste) {
  ScenarioSpec s;
  s.blocks = {
      {BlockType::eval, {{tk("TaskA"), 60}, {tk("TaskB"), 60}}},
      {BlockType::learn, {{tk("TaskA"), 100}}},
      {BlockType::eval, {{tk("TaskA"), 10}, {tk("TaskB"), 10}}},
      {BlockType::learn, {{tk("TaskB"), 100}}},
      {BlockType::eval, {{tk("TaskA"), 10}, {tk("TaskB"), 10}}},
      {BlockType::learn, {{tk("TaskA"), 100}}},
      {BlockType::eval, {{tk("TaskA"), 10}, {tk("TaskB"), 10}}},
      {BlockType::learn, {{tk("TaskB"), 100}}},
      {BlockType::eval, {{tk("TaskA"), 10}, {tk("TaskB"), 10}}},
  };
  if (with_ste) s.ste = {{tk("TaskA"), 200}, {tk("TaskB"), 200}};
  return s;
}

std::vector<Fixture> oracle_fixtures() {
  std::vector<Fixture> fixtures;
  auto add = [&](const std::string& name, ScenarioSpec spec,
                 LearnerProfile profile) {
    spec.lifetime_id = name;
    fixtures.push_back({name, std::move(spec), std::move(profile)});
  };

  LearnerProfile plain = plain_profile();

  LearnerProfile transfer_pos = plain;
  transfer_pos.transfer[{tk("TaskA"), tk("TaskB")}] = 0.1;
  transfer_pos.transfer[{tk("TaskB"), tk("TaskA")}] = 0.1;

  LearnerProfile transfer_neg = plain;
  transfer_neg.transfer[{tk("TaskA"), tk("TaskB")}] = -0.15;
  transfer_neg.transfer[{tk("TaskB"), tk("TaskA")}] = -0.1;

  LearnerProfile forgetful = plain;
  forgetful.tasks[tk("TaskA")].forgetting = 0.015;
  forgetful.tasks[tk("TaskB")].forgetting = 0.015;

  LearnerProfile mixed = transfer_pos;
  mixed.tasks[tk("TaskA")].forgetting = 0.01;
  mixed.tasks[tk("TaskB")].forgetting = 0.01;

  LearnerProfile noop;
  noop.tasks[tk("TaskA")] = {50.0, 0.1, 50.0, 0.0};
  noop.tasks[tk("TaskB")] = {30.0, 0.1, 30.0, 0.0};

  LearnerProfile fast = plain;
  fast.tasks[tk("TaskA")].learn_rate = 0.2;
  fast.tasks[tk("TaskB")].learn_rate = 0.15;

  LearnerProfile three = plain;
  three.tasks[tk("TaskC")] = {60.0, 0.04, 20.0, 0.0};
  three.transfer[{tk("TaskA"), tk("TaskC")}] = 0.2;

  LearnerProfile stairs;
  stairs.tasks[tk("TaskA")] = {10.0, 0.1, 10.0, 0.0};
  stairs.tasks[tk("TaskB")] = {20.0, 0.1, 20.0, 0.0};
  stairs.tasks[tk("TaskC")] = {30.0, 0.1, 30.0, 0.0};

  LearnerProfile variants;
  variants.tasks[tk("Nav#day")] = {90.0, 0.05, 15.0, 0.0};
  variants.tasks[tk("Nav#night")] = {70.0, 0.04, 10.0, 0.01};
  variants.transfer[{tk("Nav#day"), tk("Nav#night")}] = 0.15;

  const ScenarioSpec table2 = bracketed();
  add("table2-plain", table2, plain);
  add("table2-transfer", table2, transfer_pos);
  add("table2-negative", table2, transfer_neg);
  add("table2-forget", table2, forgetful);
  add("table2-mixed", table2, mixed);
  add("table2-noop", table2, noop);

  add("alt-plain", alternating(false), plain);
  add("alt-transfer", alternating(true), transfer_pos);
  add("alt-negative", alternating(true), transfer_neg);
  add("alt-forget", alternating(true), forgetful);
  add("alt-mixed", alternating(true), mixed);

  ScenarioSpec table1;
  table1.blocks = {
      {BlockType::learn, {{tk("TaskA"), 60}}},
      {BlockType::learn, {{tk("TaskA"), 40}}},
      {BlockType::learn, {{tk("TaskA"), 60}}},
  };
  add("table1-plain", table1, plain);
  add("table1-fast", table1, fast);

  ScenarioSpec staircase;
  staircase.blocks = {
      {BlockType::learn, {{tk("TaskA"), 30}}},
      {BlockType::learn, {{tk("TaskB"), 30}}},
      {BlockType::learn, {{tk("TaskC"), 30}}},
  };
  add("staircase", staircase, stairs);

  ScenarioSpec recovery;
  recovery.blocks = {
      {BlockType::learn, {{tk("TaskA"), 50}}},
      {BlockType::learn, {{tk("TaskB"), 50}}},
      {BlockType::learn, {{tk("TaskA"), 50}}},
      {BlockType::learn, {{tk("TaskB"), 50}}},
      {BlockType::learn, {{tk("TaskA"), 50}}},
  };
  add("recovery-forget", recovery, forgetful);
  add("recovery-mixed", recovery, mixed);

  ScenarioSpec identity;
  identity.blocks = {{BlockType::learn, {{tk("TaskA"), 80}}}};
  identity.ste = {{tk("TaskA"), 80}};
  add("identity-plain", identity, plain);
  add("identity-fast", identity, fast);

  ScenarioSpec ste_rich = bracketed();
  ste_rich.ste = {{tk("TaskA"), 120}, {tk("TaskA"), 120}, {tk("TaskB"), 150}};
  add("ste-rich-transfer", ste_rich, transfer_pos);
  add("ste-rich-forget", ste_rich, forgetful);

  ScenarioSpec variant_scenario;
  variant_scenario.blocks = {
      {BlockType::eval, {{tk("Nav#day"), 30}, {tk("Nav#night"), 30}}},
      {BlockType::learn, {{tk("Nav#day"), 60}}},
      {BlockType::eval, {{tk("Nav#day"), 10}, {tk("Nav#night"), 10}}},
      {BlockType::learn, {{tk("Nav#night"), 60}}},
      {BlockType::eval, {{tk("Nav#day"), 10}, {tk("Nav#night"), 10}}},
  };
  add("variants", variant_scenario, variants);

  ScenarioSpec eval_only;
  eval_only.blocks = {
      {BlockType::eval, {{tk("TaskA"), 20}, {tk("TaskB"), 20}}},
      {BlockType::eval, {{tk("TaskA"), 20}, {tk("TaskB"), 20}}},
  };
  add("eval-only", eval_only, plain);

  ScenarioSpec multitask;
  multitask.blocks = {
      {BlockType::eval,
       {{tk("TaskA"), 30}, {tk("TaskB"), 30}, {tk("TaskC"), 30}}},
      {BlockType::learn, {{tk("TaskA"), 40}}},
      {BlockType::eval,
       {{tk("TaskA"), 10}, {tk("TaskB"), 10}, {tk("TaskC"), 10}}},
      {BlockType::learn,
       {{tk("TaskB"), 30}, {tk("TaskC"), 30}, {tk("TaskB"), 30}}},
      {BlockType::eval,
       {{tk("TaskA"), 10}, {tk("TaskB"), 10}, {tk("TaskC"), 10}}},
  };
  add("multitask-block", multitask, three);

  ScenarioSpec three_tasks;
  three_tasks.blocks = {
      {BlockType::eval,
       {{tk("TaskA"), 30}, {tk("TaskB"), 30}, {tk("TaskC"), 30}}},
      {BlockType::learn, {{tk("TaskA"), 60}}},
      {BlockType::eval,
       {{tk("TaskA"), 10}, {tk("TaskB"), 10}, {tk("TaskC"), 10}}},
      {BlockType::learn, {{tk("TaskB"), 60}}},
      {BlockType::eval,
       {{tk("TaskA"), 10}, {tk("TaskB"), 10}, {tk("TaskC"), 10}}},
      {BlockType::learn, {{tk("TaskC"), 60}}},
      {BlockType::eval,
       {{tk("TaskA"), 10}, {tk("TaskB"), 10}, {tk("TaskC"), 10}}},
  };
  three_tasks.ste = {{tk("TaskA"), 60}, {tk("TaskB"), 60}, {tk("TaskC"), 60}};
  add("three-tasks", three_tasks, three);

  return fixtures;
}

std::map<std::string, std::optional<double>> engine_values(
    const ScenarioSpec& spec, const LearnerProfile& profile,
    const PreprocessConfig& config) {
  const LifetimeLog log = generate_lifetime(spec, profile);
  const SteStore ste = generate_ste_store(spec, profile);
  const PreprocessedLog pre = preprocess(log, ste, config);
  std::map<std::string, std::optional<double>> out;
  for (const MetricResult& m : compute_all_metrics(pre)) {
    out[m.name] = m.value;
  }
  return out;
}

bool matches(const std::optional<double>& engine,
             const std::optional<double>& oracle) {
  if (engine.has_value() != oracle.has_value()) return false;
  if (!engine) return true;
  const double tolerance = 1e-9 * std::max(1.0, std::abs(*oracle));
  return std::abs(*engine - *oracle) <= tolerance;
}

std::string show(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

void check_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const PreprocessConfig config;
  const auto fixtures = oracle_fixtures();
  bool ok = fixtures.size() >= 20;
  if (!ok) note("fewer than 20 fixtures");
  for (const Fixture& fixture : fixtures) {
    const auto engine = engine_values(fixture.spec, fixture.profile, config);
    const auto oracle = expected_values(fixture.spec, fixture.profile, config);
    for (std::string_view id : kAllMetrics) {
      const auto& e = engine.at(std::string(id));
      const auto& o = oracle.at(std::string(id));
      if (!matches(e, o)) {
        ok = false;
        note(fixture.name + " / " + std::string(id) + ": engine " + show(e) +
             " vs oracle " + show(o));
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds >= 10.0) {
    ok = false;
    note("runtime " + std::to_string(seconds) + "s exceeds 10s");
  }
  char timing[64];
  std::snprintf(timing, sizeof(timing), "%.2fs", seconds);
  criterion(1, "oracle equivalence on " + std::to_string(fixtures.size()) +
                   " noise-free fixtures (1e-9 relative, " + timing + ")",
            ok);
}

void check_figure_regimes() {
  const PreprocessConfig config;
  bool ok = true;
  auto expect = [&](const std::optional<double>& v, bool above, double bound,
                    const std::string& what) {
    if (!v || (above ? *v <= bound : *v >= bound)) {
      ok = false;
      note(what + " = " + show(v));
    }
  };

  LearnerProfile rising = plain_profile();
  rising.transfer[{tk("TaskA"), tk("TaskB")}] = 0.1;
  rising.transfer[{tk("TaskB"), tk("TaskA")}] = 0.1;
  const auto up = engine_values(alternating(true), rising, config);
  expect(up.at(std::string(kPerformanceMaintenance)), true, 0.0, "rising PM");
  expect(up.at(std::string(kForwardTransfer)), true, 0.0, "rising FT");
  expect(up.at(std::string(kRelativePerformance)), true, 1.0, "rising RP");
  expect(up.at(std::string(kSampleEfficiency)), true, 1.0, "rising SE");

  LearnerProfile fading = plain_profile();
  fading.tasks[tk("TaskA")].forgetting = 0.015;
  fading.tasks[tk("TaskB")].forgetting = 0.015;
  const auto down = engine_values(alternating(true), fading, config);
  expect(down.at(std::string(kPerformanceMaintenance)), false, 0.0,
         "fading PM");
  expect(down.at(std::string(kBackwardTransfer)), false, 0.0, "fading BT");
  expect(down.at(std::string(kRelativePerformance)), false, 1.0, "fading RP");
  expect(down.at(std::string(kSampleEfficiency)), false, 1.0, "fading SE");

  criterion(2, "figure regimes: transfer lifts PM/FT/RP/SE, forgetting drops "
               "PM/BT/RP/SE",
            ok);
}

void check_identities() {
  const PreprocessConfig config;
  bool ok = true;

  ScenarioSpec identity;
  identity.blocks = {{BlockType::learn, {{tk("TaskA"), 80}}}};
  identity.ste = {{tk("TaskA"), 80}};
  const auto same = engine_values(identity, plain_profile(), config);
  if (same.at(std::string(kRelativePerformance)) != std::optional<double>(1.0)) {
    ok = false;
    note("RP on identical curves: " +
         show(same.at(std::string(kRelativePerformance))));
  }
  if (same.at(std::string(kSampleEfficiency)) != std::optional<double>(1.0)) {
    ok = false;
    note("SE on identical curves: " +
         show(same.at(std::string(kSampleEfficiency))));
  }

  LearnerProfile noop;
  noop.tasks[tk("TaskA")] = {50.0, 0.1, 50.0, 0.0};
  noop.tasks[tk("TaskB")] = {30.0, 0.1, 30.0, 0.0};
  const auto flat = engine_values(alternating(false), noop, config);
  for (std::string_view id :
       {kPerformanceMaintenance, kForwardTransfer, kBackwardTransfer}) {
    if (flat.at(std::string(id)) != std::optional<double>(0.0)) {
      ok = false;
      note(std::string(id) + " on constant evaluations: " +
           show(flat.at(std::string(id))));
    }
  }
  criterion(3, "identities: RP = SE = 1 on identical curves, PM = FT = BT = 0 "
               "on constant evaluations",
            ok);
}

void check_contrast_properties() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  auto draw = [&] { return std::pow(10.0, exponent(rng)); };
  bool ok = true;
  for (int i = 0; i < 10000 && ok; ++i) {
    const double a = draw();
    const double b = draw();
    const double c = contrast(a, b);
    if (c != -contrast(b, a)) {
      ok = false;
      note("antisymmetry failed at a=" + std::to_string(a) +
           " b=" + std::to_string(b));
    }
    if (!(c > -1.0 && c <= 1.0)) {
      ok = false;
      note("range failed: " + std::to_string(c));
    }
    const double k = draw();
    const double scaled = contrast(k * a, k * b);
    if (std::abs(scaled - c) > 1e-12 * std::max(1.0, std::abs(c))) {
      ok = false;
      note("scale invariance failed at k=" + std::to_string(k));
    }
    if (contrast(a, 0.0) != 1.0) {
      ok = false;
      note("contrast(a, 0) != 1");
    }
  }
  criterion(4, "contrast properties over 10000 random positive pairs", ok);
}

double brute_force_theil_sen(const std::vector<std::pair<double, double>>& p) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i].first != p[j].first) {
        slopes.push_back((p[j].second - p[i].second) /
                         (p[j].first - p[i].first));
      }
    }
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  return n % 2 ? slopes[n / 2] : 0.5 * (slopes[n / 2 - 1] + slopes[n / 2]);
}

void check_theil_sen() {
  bool ok = true;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-25.0, 25.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < n; ++i) {
      points.emplace_back(static_cast<double>(i), dist(rng));
    }
    if (theil_sen_slope(points) != brute_force_theil_sen(points)) {
      ok = false;
      note("mismatch on random set of " + std::to_string(n) + " points");
      break;
    }
  }
  // Collinear y = 2x with 40% of the points displaced far off the line.
  std::vector<std::pair<double, double>> line;
  for (int x = 1; x <= 10; ++x) line.emplace_back(x, 2.0 * x);
  for (int i : {0, 1, 8, 9}) line[i].second -= 5000.0;
  if (theil_sen_slope(line) != 2.0) {
    ok = false;
    note("outlier fixture slope " + std::to_string(theil_sen_slope(line)));
  }
  criterion(5, "Theil-Sen equals brute force up to n = 50 and shrugs off "
               "outliers",
            ok);
}

void check_preprocessing() {
  const PreprocessConfig config;
  bool ok = true;

  if (smoothing_window(4, config) != 1 || smoothing_window(50, config) != 10 ||
      smoothing_window(1000, config) != 100) {
    ok = false;
    note("window rule broken at n in {4, 50, 1000}");
  }

  // Every processed value of every fixture lands in [1, 101].
  for (const Fixture& fixture : oracle_fixtures()) {
    const LifetimeLog log = generate_lifetime(fixture.spec, fixture.profile);
    const SteStore ste = generate_ste_store(fixture.spec, fixture.profile);
    const PreprocessedLog pre = preprocess(log, ste, config);
    for (double v : pre.processed) {
      if (!(v >= 1.0 && v <= 101.0)) {
        ok = false;
        note(fixture.name + ": processed value " + std::to_string(v));
        break;
      }
    }
    for (const auto& [task, curves] : pre.ste) {
      for (const auto& curve : curves) {
        for (double v : curve.processed) {
          if (!(v >= 1.0 && v <= 101.0)) {
            ok = false;
            note(fixture.name + ": processed STE value " + std::to_string(v));
            break;
          }
        }
      }
    }
  }

  // Reordering the pipeline (clamp+scale before smoothing) changes the
  // output on a spike fixture; the engine follows smooth -> clamp -> scale.
  std::vector<double> spike(20, 1.0);
  spike[10] = 1000.0;
  std::ostringstream stream;
  for (std::size_t i = 0; i < spike.size(); ++i) {
    nlohmann::json rec;
    rec["exp_num"] = i;
    rec["block_num"] = 0;
    rec["block_type"] = "learn";
    rec["task_name"] = "spike";
    rec["task_params"] = nlohmann::json::object();
    rec["metrics"] = {{"reward", spike[i]}};
    stream << rec.dump() << '\n';
  }
  std::istringstream in(stream.str());
  const LifetimeLog log = parse_log(in, "reward");
  const PreprocessedLog pre = preprocess(log, SteStore{}, config);
  const std::vector<double> smoothed = smooth_block(spike, config);
  const TaskBounds bounds = compute_clamp_bounds(smoothed, config);
  const std::vector<double> expected = clamp_and_scale(smoothed, bounds, config);
  const std::vector<double> reordered = smooth_block(
      clamp_and_scale(spike, compute_clamp_bounds(spike, config), config),
      config);
  if (pre.processed != expected) {
    ok = false;
    note("pipeline does not equal smooth -> clamp -> scale");
  }
  if (pre.processed == reordered) {
    ok = false;
    note("reordering the pipeline did not change the output");
  }
  criterion(6, "preprocessing: output range, window rule, and step order", ok);
}

void check_recovery_edges() {
  bool ok = true;
  if (recovery_time({9, 1, 1, 1}, 5.0) != 0) {
    ok = false;
    note("start above prior TLP should be 0");
  }
  if (recovery_time({1, 1, 1}, 5.0) != 4) {
    ok = false;
    note("never recovering should be length + 1");
  }
  if (recovery_time({1, 2, 3, 4}, 3.0) != 3) {
    ok = false;
    note("first crossing should be its 1-based index");
  }
  criterion(7, "recovery-time edge rules", ok);
}

// --- criterion 8: CLI end-to-end ---

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run(const std::string& command) {
  return std::system((command + " > /dev/null 2> /dev/null").c_str());
}

void check_end_to_end(const std::string& cli) {
  bool ok = true;
  const auto base =
      std::filesystem::temp_directory_path() / "lifemetrics_acceptance";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);

  {
    std::ofstream spec(base / "scenario.conf");
    spec << "lifetime_id = clone\n"
            "block = eval TaskA:40 TaskB:40\n"
            "block = learn TaskA:100\n"
            "block = eval TaskA:10 TaskB:10\n"
            "block = learn TaskB:100\n"
            "block = eval TaskA:10 TaskB:10\n"
            "ste = TaskA 120\n"
            "ste = TaskB 120\n";
  }
  {
    std::ofstream profile(base / "profile.conf");
    profile << "seed = 11\n"
               "noise_std = 0\n"
               "task = TaskA asymptote=100 learn_rate=0.03 start=10\n"
               "task = TaskB asymptote=80 learn_rate=0.025 start=5\n"
               "transfer = TaskA TaskB 0.1\n";
  }

  // synth -> compute twice with one seed: byte-identical artifacts.
  for (const char* round : {"r1", "r2"}) {
    const auto dir = (base / round).string();
    if (run(cli + " synth --spec " + (base / "scenario.conf").string() +
            " --profile " + (base / "profile.conf").string() + " --out-dir " +
            dir + " --seed 77 --oracle") != 0) {
      ok = false;
      note(std::string("synth failed in ") + round);
    }
    if (run(cli + " compute --log " + dir + "/lifetime.jsonl --ste-dir " +
            dir + "/ste --output " + dir + "/report.json") != 0) {
      ok = false;
      note(std::string("compute failed in ") + round);
    }
  }
  for (const char* file :
       {"lifetime.jsonl", "expected_values.json", "report.json"}) {
    const std::string r1 = read_file(base / "r1" / file);
    const std::string r2 = read_file(base / "r2" / file);
    if (r1.empty() || r1 != r2) {
      ok = false;
      note(std::string(file) + " not byte-identical across runs");
    }
  }

  // A noisy profile must not produce an oracle when one is demanded.
  {
    std::ofstream profile(base / "noisy.conf");
    profile << "seed = 3\n"
               "noise_std = 1.0\n"
               "task = TaskA asymptote=100 learn_rate=0.03 start=10\n"
               "task = TaskB asymptote=80 learn_rate=0.025 start=5\n";
  }
  if (run(cli + " synth --spec " + (base / "scenario.conf").string() +
          " --profile " + (base / "noisy.conf").string() + " --out-dir " +
          (base / "noisy").string() + " --oracle") == 0) {
    ok = false;
    note("synth --oracle accepted a noisy profile");
  }

  // Three stochastic clones: aggregate statistics match hand recomputation.
  std::vector<double> pm_values;
  std::vector<std::string> report_paths;
  for (int seed : {101, 202, 303}) {
    const auto dir = (base / ("clone" + std::to_string(seed))).string();
    if (run(cli + " synth --spec " + (base / "scenario.conf").string() +
            " --profile " + (base / "noisy.conf").string() + " --out-dir " +
            dir + " --seed " + std::to_string(seed)) != 0 ||
        run(cli + " compute --log " + dir + "/lifetime.jsonl --ste-dir " +
            dir + "/ste --output " + dir + "/report.json") != 0) {
      ok = false;
      note("clone pipeline failed for seed " + std::to_string(seed));
      continue;
    }
    report_paths.push_back(dir + "/report.json");
    const auto doc = nlohmann::json::parse(read_file(dir + "/report.json"));
    const auto& value =
        doc.at("metrics").at(std::string(kPerformanceMaintenance)).at("value");
    if (!value.is_null()) pm_values.push_back(value.get<double>());
  }
  std::string aggregate_paths;
  for (const std::string& path : report_paths) aggregate_paths += " " + path;
  if (run(cli + " aggregate" + aggregate_paths + " --output " +
          (base / "aggregate.json").string()) != 0) {
    ok = false;
    note("aggregate failed");
  } else {
    const auto doc =
        nlohmann::json::parse(read_file(base / "aggregate.json"));
    const auto& pm =
        doc.at("metrics").at(std::string(kPerformanceMaintenance));
    if (pm.at("count").get<std::size_t>() != pm_values.size() ||
        pm_values.size() != 3) {
      ok = false;
      note("aggregate count mismatch");
    } else {
      double sum = 0.0;
      for (double v : pm_values) sum += v;
      const double mean_by_hand = sum / 3.0;
      double ss = 0.0;
      for (double v : pm_values) {
        ss += (v - mean_by_hand) * (v - mean_by_hand);
      }
      const double std_by_hand = std::sqrt(ss / 3.0);
      if (std::abs(pm.at("mean").get<double>() - mean_by_hand) > 1e-12 ||
          std::abs(pm.at("std").get<double>() - std_by_hand) > 1e-12) {
        ok = false;
        note("aggregate statistics disagree with hand recomputation");
      }
    }
  }

  std::filesystem::remove_all(base);
  criterion(8, "CLI synth -> compute -> aggregate: deterministic bytes and "
               "hand-checked statistics",
            ok);
}

}  // namespace

int main(int argc, char** argv) {
  check_oracle_equivalence();
  check_figure_regimes();
  check_identities();
  check_contrast_properties();
  check_theil_sen();
  check_preprocessing();
  check_recovery_edges();
  if (argc > 1) {
    check_end_to_end(argv[1]);
  } else {
    criterion(8, "CLI end-to-end (no CLI path given)", false);
  }
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
