// Command-line surface: validate logs, compute metrics for one lifetime,
// aggregate cloned lifetimes, and generate synthetic fixtures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lifemetrics/config.hpp"
#include "lifemetrics/engine.hpp"
#include "lifemetrics/log_io.hpp"
#include "lifemetrics/report.hpp"
#include "lifemetrics/synth.hpp"
#include "lifemetrics/validate.hpp"

namespace {

using namespace lifemetrics;

constexpr const char* kConfigEnvVar = "LIFEMETRICS_CONFIG";

ToolConfig resolve_config(const std::string& config_flag) {
  std::filesystem::path path;
  if (!config_flag.empty()) {
    path = config_flag;
  } else if (const char* env = std::getenv(kConfigEnvVar)) {
    path = env;
  }
  if (path.empty()) return {};
  return load_tool_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
  } else {
    write_text(output_path, text);
  }
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
  }
  return out;
}

int run_validate(const std::string& log_path, const std::string& config_flag,
                 const std::string& perf_key_flag) {
  ToolConfig config = resolve_config(config_flag);
  if (!perf_key_flag.empty()) config.perf_key = perf_key_flag;
  const LifetimeLog log = parse_log_file(log_path, config.perf_key);
  std::cout << validate(log).summary();
  return 0;
}

int run_compute(const std::string& log_path, const std::string& ste_dir_flag,
                const std::string& perf_key_flag,
                const std::string& config_flag, const std::string& output_path,
                const std::string& format_flag) {
  ToolConfig config = resolve_config(config_flag);
  if (!perf_key_flag.empty()) config.perf_key = perf_key_flag;
  if (!ste_dir_flag.empty()) config.ste_dir = ste_dir_flag;
  if (!format_flag.empty()) config.format = format_flag;
  const RenderFormat format = render_format_from_string(config.format);

  const LifetimeLog log = parse_log_file(log_path, config.perf_key);
  SteStore ste;
  if (!config.ste_dir.empty()) ste = load_ste(config.ste_dir, config.perf_key);
  const PreprocessedLog pre = preprocess(log, ste, config.preprocess);
  const auto metrics = compute_all_metrics(pre);
  const LifetimeReport report = build_report(pre, metrics);
  emit(output_path, render(report, format));

  const bool any_defined =
      std::any_of(metrics.begin(), metrics.end(),
                  [](const MetricResult& m) { return m.value.has_value(); });
  if (!any_defined) {
    std::cerr << "warning: every metric is undefined for this log\n";
    return 2;
  }
  return 0;
}

int run_aggregate(const std::vector<std::string>& report_paths,
                  const std::string& output_path) {
  std::vector<LifetimeReport> reports;
  for (const std::string& path : report_paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    reports.push_back(report_from_json(doc));
  }
  const AggregateReport agg = aggregate(reports);
  for (const std::string& warning : agg.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  emit(output_path, aggregate_to_json(agg).dump(2) + "\n");
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& profile_path,
              const std::string& out_dir, const std::string& config_flag,
              bool seed_given, std::uint64_t seed, bool oracle_requested) {
  ToolConfig config = resolve_config(config_flag);
  ScenarioSpec spec = scenario_from_kv(read_kv_file(spec_path));
  LearnerProfile profile = profile_from_kv(read_kv_file(profile_path));
  if (seed_given) profile.seed = seed;
  if (oracle_requested && profile.noise_std != 0.0) {
    std::cerr << "error: oracle requires zero noise\n";
    return 1;
  }

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path base(out_dir);

  const LifetimeLog log = generate_lifetime(spec, profile);
  write_log_file(base / "lifetime.jsonl", log);
  std::cout << (base / "lifetime.jsonl").string() << '\n';

  if (!spec.ste.empty()) {
    std::filesystem::create_directories(base / "ste");
    const SteStore store = generate_ste_store(spec, profile);
    for (const auto& [task, curves] : store.curves) {
      std::size_t index = 0;
      for (const SteCurve& curve : curves) {
        LifetimeLog ste_log;
        ste_log.perf_key = spec.perf_key;
        ste_log.lifetime_id = curve.source_id;
        for (std::size_t i = 0; i < curve.values.size(); ++i) {
          ExperienceRecord rec;
          rec.exp_num = static_cast<std::int64_t>(i);
          rec.block_num = 0;
          rec.block_type = BlockType::learn;
          rec.task = task;
          rec.task_params = task_params_for(task);
          rec.lifetime_id = curve.source_id;
          rec.metrics[spec.perf_key] = curve.values[i];
          ste_log.records.push_back(std::move(rec));
        }
        const auto path = base / "ste" /
                          (sanitize(task.str()) + "_" +
                           std::to_string(++index) + ".jsonl");
        write_log_file(path, ste_log);
        std::cout << path.string() << '\n';
      }
    }
  }

  if (profile.noise_std == 0.0) {
    const auto expected = expected_values(spec, profile, config.preprocess);
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["lifetime_id"] = spec.lifetime_id;
    nlohmann::json metrics;
    for (const auto& [id, value] : expected) {
      if (value) {
        metrics[id] = *value;
      } else {
        metrics[id] = nullptr;
      }
    }
    doc["metrics"] = std::move(metrics);
    write_text((base / "expected_values.json").string(), doc.dump(2) + "\n");
    std::cout << (base / "expected_values.json").string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lifelong-learning metrics engine"};
  app.require_subcommand(1);

  std::string log_path, ste_dir, perf_key, config_path, output_path, format;
  std::vector<std::string> report_paths;
  std::string spec_path, profile_path, out_dir;
  std::uint64_t seed = 0;
  bool oracle_requested = false;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a log and list computable metrics");
  validate_cmd->add_option("--log", log_path, "log file (.jsonl or .csv)")
      ->required();
  validate_cmd->add_option("--perf-key", perf_key, "performance metric name");
  validate_cmd->add_option("--config", config_path, "config file");

  CLI::App* compute_cmd =
      app.add_subcommand("compute", "compute all metrics for one lifetime");
  compute_cmd->add_option("--log", log_path, "log file (.jsonl or .csv)")
      ->required();
  compute_cmd->add_option("--ste-dir", ste_dir, "directory of STE logs");
  compute_cmd->add_option("--perf-key", perf_key, "performance metric name");
  compute_cmd->add_option("--config", config_path, "config file");
  compute_cmd->add_option("--output", output_path, "output file (default: stdout)");
  compute_cmd->add_option("--format", format,
                          "json, csv, markdown or plotdata");

  CLI::App* aggregate_cmd = app.add_subcommand(
      "aggregate", "aggregate metric statistics across lifetime reports");
  aggregate_cmd
      ->add_option("reports", report_paths, "lifetime report JSON files")
      ->required()
      ->expected(-1);
  aggregate_cmd->add_option("--output", output_path,
                            "output file (default: stdout)");

  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic lifetime, STE curves and, when "
               "noise-free, expected metric values");
  synth_cmd->add_option("--spec", spec_path, "scenario spec file")->required();
  synth_cmd->add_option("--profile", profile_path, "learner profile file")
      ->required();
  synth_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  synth_cmd->add_option("--config", config_path, "config file");
  CLI::Option* seed_opt =
      synth_cmd->add_option("--seed", seed, "override the profile seed");
  synth_cmd->add_flag("--oracle", oracle_requested,
                      "require the expected-values oracle file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      return run_validate(log_path, config_path, perf_key);
    }
    if (compute_cmd->parsed()) {
      return run_compute(log_path, ste_dir, perf_key, config_path, output_path,
                         format);
    }
    if (aggregate_cmd->parsed()) {
      return run_aggregate(report_paths, output_path);
    }
    if (synth_cmd->parsed()) {
      return run_synth(spec_path, profile_path, out_dir, config_path,
                       seed_opt->count() > 0, seed, oracle_requested);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
