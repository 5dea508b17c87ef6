#include "lifemetrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lifemetrics {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string interpretation(const MetricResult& m) {
  if (!m.value) return "undefined: " + m.undefined_reason;
  const double v = *m.value;
  if (m.name == kPerformanceMaintenance) {
    if (v > 0) return "PM > 0: task performance improves across the lifetime (demonstrates lifelong learning)";
    if (v < 0) return "PM < 0: indicates forgetting";
    return "PM = 0: no forgetting, no additional improvement";
  }
  if (m.name == kForwardTransfer) {
    if (v > 0) return "FT > 0: positive forward transfer (demonstrates lifelong learning)";
    if (v < 0) return "FT < 0: indicates interference";
    return "FT = 0: no transfer or forgetting";
  }
  if (m.name == kBackwardTransfer) {
    if (v > 0) return "BT > 0: positive backward transfer (demonstrates lifelong learning)";
    if (v < 0) return "BT < 0: indicates interference";
    return "BT = 0: no interference, but no transfer either";
  }
  if (m.name == kRelativePerformance) {
    if (v > 1) return "RP > 1: outperforms the single-task experts over the same experience (demonstrates lifelong learning)";
    if (v < 1) return "RP < 1: underperforms the single-task experts";
    return "RP = 1: matches the single-task experts";
  }
  if (m.name == kSampleEfficiency) {
    if (v > 1) return "SE > 1: learns faster or higher than the single-task experts (demonstrates lifelong learning)";
    if (v < 1) return "SE < 1: learns slower or lower than the single-task experts";
    return "SE = 1: matches the single-task experts";
  }
  if (m.name == kPerformanceRecovery) {
    if (v > 0) return "PR > 0: recovery after changes is speeding up (demonstrates lifelong learning)";
    if (v < 0) return "PR < 0: recovery after changes is slowing down";
    return "PR = 0: recovery times neither improve nor worsen";
  }
  if (m.name == kCumulativeGain) {
    if (v >= 0) return "CG >= 0: the agent keeps its ability to learn";
    return "CG < 0: the ability to learn is deteriorating";
  }
  if (m.name == kLearnBurn) {
    if (v < 1) return "LB < 1: learns quickly while adapting to changes (demonstrates lifelong learning)";
    if (v > 1) return "LB > 1: learns slowly while adapting to changes";
    return "LB = 1: block-level learning matches the lifetime trend";
  }
  return "";
}

nlohmann::json labeled_to_json(
    const std::vector<std::pair<std::string, double>>& items) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [label, value] : items) {
    arr.push_back({{"label", label}, {"value", value}});
  }
  return arr;
}

std::vector<std::pair<std::string, double>> labeled_from_json(
    const nlohmann::json& arr) {
  std::vector<std::pair<std::string, double>> items;
  for (const auto& item : arr) {
    items.emplace_back(item.at("label").get<std::string>(),
                       item.at("value").get<double>());
  }
  return items;
}

}  // namespace

LifetimeReport build_report(const PreprocessedLog& pre,
                            const std::vector<MetricResult>& metrics) {
  LifetimeReport report;
  report.lifetime_id = pre.log.lifetime_id;
  report.perf_key = pre.log.perf_key;
  report.params = pre.params;
  report.config = pre.config;
  report.metrics = metrics;

  std::size_t learn_blocks = 0;
  for (const BlockInfo& block : pre.log.blocks) {
    LifetimeReport::BlockBrief brief;
    brief.block_num = block.block_num;
    brief.block_type = block.block_type;
    brief.length = block.length;
    for (const TaskKey& task : block.tasks) {
      brief.tasks.push_back(task.str());
      const std::string name = task.str();
      if (std::find(report.tasks.begin(), report.tasks.end(), name) ==
          report.tasks.end()) {
        report.tasks.push_back(name);
      }
    }
    if (block.block_type == BlockType::learn) {
      ++learn_blocks;
      report.total_lx += block.length;
    } else {
      report.total_ex += block.length;
    }
    report.blocks.push_back(std::move(brief));
  }

  report.series.reserve(pre.log.records.size());
  for (std::size_t i = 0; i < pre.log.records.size(); ++i) {
    const ExperienceRecord& rec = pre.log.records[i];
    LifetimeReport::SeriesRow row;
    row.exp_num = rec.exp_num;
    row.block_num = rec.block_num;
    row.block_type = rec.block_type;
    row.task_name = rec.task.name;
    row.task_variant = rec.task.variant;
    row.raw = pre.raw[i];
    row.processed = pre.processed[i];
    report.series.push_back(std::move(row));
  }

  // Scenario context is mandatory: metric values are only meaningful next
  // to the structure that produced them.
  std::ostringstream scenario;
  scenario << "scenario: " << pre.log.blocks.size() << " blocks ("
           << learn_blocks << " learning, "
           << pre.log.blocks.size() - learn_blocks << " evaluation), "
           << report.tasks.size() << " tasks, " << report.total_lx
           << " LXs, " << report.total_ex << " EXs";
  report.context.push_back(scenario.str());
  for (const MetricResult& m : metrics) {
    for (const std::string& note : m.notes) {
      report.context.push_back(m.name + ": " + note);
    }
  }
  return report;
}

nlohmann::json report_to_json(const LifetimeReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = report.schema_version;
  doc["lifetime_id"] = report.lifetime_id;
  doc["perf_key"] = report.perf_key;

  nlohmann::json scenario;
  scenario["total_lx"] = report.total_lx;
  scenario["total_ex"] = report.total_ex;
  scenario["tasks"] = report.tasks;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& brief : report.blocks) {
    blocks.push_back({{"block_num", brief.block_num},
                      {"block_type", std::string(to_string(brief.block_type))},
                      {"tasks", brief.tasks},
                      {"length", brief.length}});
  }
  scenario["blocks"] = std::move(blocks);
  doc["scenario"] = std::move(scenario);

  nlohmann::json normalization;
  normalization["scale_min"] = report.params.scale_min;
  normalization["scale_max"] = report.params.scale_max;
  normalization["window_fraction"] = report.config.window_fraction;
  normalization["window_cap"] = report.config.window_cap;
  normalization["clamp_low_pct"] = report.config.clamp_low_pct;
  normalization["clamp_high_pct"] = report.config.clamp_high_pct;
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& [task, b] : report.params.bounds) {
    bounds.push_back({{"task_name", task.name},
                      {"task_variant", task.variant},
                      {"low", b.low},
                      {"high", b.high}});
  }
  normalization["bounds"] = std::move(bounds);
  doc["normalization"] = std::move(normalization);

  nlohmann::json metrics;
  for (const MetricResult& m : report.metrics) {
    nlohmann::json entry;
    if (m.value) {
      entry["value"] = *m.value;
    } else {
      entry["value"] = nullptr;
      entry["undefined_reason"] = m.undefined_reason;
    }
    entry["sub_values"] = labeled_to_json(m.sub_values);
    entry["details"] = labeled_to_json(m.details);
    entry["notes"] = m.notes;
    metrics[m.name] = std::move(entry);
  }
  doc["metrics"] = std::move(metrics);

  doc["context"] = report.context;

  nlohmann::json series = nlohmann::json::array();
  for (const auto& row : report.series) {
    series.push_back({{"exp_num", row.exp_num},
                      {"block_num", row.block_num},
                      {"block_type", std::string(to_string(row.block_type))},
                      {"task_name", row.task_name},
                      {"task_variant", row.task_variant},
                      {"raw", row.raw},
                      {"processed", row.processed}});
  }
  doc["series"] = std::move(series);
  return doc;
}

LifetimeReport report_from_json(const nlohmann::json& doc) {
  LifetimeReport report;
  report.schema_version = doc.at("schema_version").get<int>();
  report.lifetime_id = doc.at("lifetime_id").get<std::string>();
  report.perf_key = doc.at("perf_key").get<std::string>();

  const auto& scenario = doc.at("scenario");
  report.total_lx = scenario.at("total_lx").get<std::size_t>();
  report.total_ex = scenario.at("total_ex").get<std::size_t>();
  report.tasks = scenario.at("tasks").get<std::vector<std::string>>();
  for (const auto& entry : scenario.at("blocks")) {
    LifetimeReport::BlockBrief brief;
    brief.block_num = entry.at("block_num").get<std::int32_t>();
    brief.block_type =
        block_type_from_string(entry.at("block_type").get<std::string>());
    brief.tasks = entry.at("tasks").get<std::vector<std::string>>();
    brief.length = entry.at("length").get<std::size_t>();
    report.blocks.push_back(std::move(brief));
  }

  const auto& normalization = doc.at("normalization");
  report.params.scale_min = normalization.at("scale_min").get<double>();
  report.params.scale_max = normalization.at("scale_max").get<double>();
  report.config.scale_min = report.params.scale_min;
  report.config.scale_max = report.params.scale_max;
  report.config.window_fraction = normalization.at("window_fraction").get<double>();
  report.config.window_cap = normalization.at("window_cap").get<std::size_t>();
  report.config.clamp_low_pct = normalization.at("clamp_low_pct").get<double>();
  report.config.clamp_high_pct = normalization.at("clamp_high_pct").get<double>();
  for (const auto& entry : normalization.at("bounds")) {
    TaskKey task{entry.at("task_name").get<std::string>(),
                 entry.at("task_variant").get<std::string>()};
    report.params.bounds[task] = {entry.at("low").get<double>(),
                                  entry.at("high").get<double>()};
  }

  for (std::string_view id : kAllMetrics) {
    const auto it = doc.at("metrics").find(std::string(id));
    if (it == doc.at("metrics").end()) continue;
    MetricResult m;
    m.name = std::string(id);
    if (!it->at("value").is_null()) {
      m.value = it->at("value").get<double>();
    } else {
      m.undefined_reason = it->value("undefined_reason", std::string());
    }
    m.sub_values = labeled_from_json(it->at("sub_values"));
    m.details = labeled_from_json(it->at("details"));
    m.notes = it->at("notes").get<std::vector<std::string>>();
    report.metrics.push_back(std::move(m));
  }

  report.context = doc.at("context").get<std::vector<std::string>>();

  for (const auto& entry : doc.at("series")) {
    LifetimeReport::SeriesRow row;
    row.exp_num = entry.at("exp_num").get<std::int64_t>();
    row.block_num = entry.at("block_num").get<std::int32_t>();
    row.block_type =
        block_type_from_string(entry.at("block_type").get<std::string>());
    row.task_name = entry.at("task_name").get<std::string>();
    row.task_variant = entry.at("task_variant").get<std::string>();
    row.raw = entry.at("raw").get<double>();
    row.processed = entry.at("processed").get<double>();
    report.series.push_back(std::move(row));
  }
  return report;
}

RenderFormat render_format_from_string(const std::string& name) {
  if (name == "json") return RenderFormat::json;
  if (name == "csv") return RenderFormat::csv;
  if (name == "markdown" || name == "md") return RenderFormat::markdown;
  if (name == "plotdata") return RenderFormat::plotdata;
  throw std::invalid_argument("unknown format: " + name);
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string render_csv(const LifetimeReport& report) {
  std::ostringstream out;
  out << "metric,kind,label,value\n";
  for (const MetricResult& m : report.metrics) {
    if (m.value) {
      out << m.name << ",lifetime,," << fmt17(*m.value) << '\n';
    } else {
      out << m.name << ",lifetime," << csv_quote("undefined: " + m.undefined_reason)
          << ",\n";
    }
    for (const auto& [label, value] : m.sub_values) {
      out << m.name << ",sub," << csv_quote(label) << ',' << fmt17(value) << '\n';
    }
    for (const auto& [label, value] : m.details) {
      out << m.name << ",detail," << csv_quote(label) << ',' << fmt17(value)
          << '\n';
    }
  }
  return out.str();
}

std::string render_markdown(const LifetimeReport& report) {
  std::ostringstream out;
  out << "# Lifetime metrics report: " << report.lifetime_id << "\n\n";
  out << "Performance key: `" << report.perf_key << "`\n\n";

  out << "## Scenario\n\n";
  out << "| block | type | tasks | experiences |\n";
  out << "|------:|------|-------|------------:|\n";
  for (const auto& brief : report.blocks) {
    out << "| " << brief.block_num << " | " << to_string(brief.block_type)
        << " | ";
    for (std::size_t i = 0; i < brief.tasks.size(); ++i) {
      if (i) out << ", ";
      out << brief.tasks[i];
    }
    out << " | " << brief.length << " |\n";
  }
  out << '\n';

  out << "## Metrics\n\n";
  out << "| metric | value | reading |\n";
  out << "|--------|------:|---------|\n";
  for (const MetricResult& m : report.metrics) {
    out << "| " << m.name << " | ";
    if (m.value) {
      out << fmt6(*m.value);
    } else {
      out << "undefined";
    }
    out << " | " << interpretation(m) << " |\n";
  }
  out << '\n';

  for (const MetricResult& m : report.metrics) {
    if (m.sub_values.empty()) continue;
    out << "### " << m.name << "\n\n";
    for (const auto& [label, value] : m.sub_values) {
      out << "- " << label << ": " << fmt6(value) << '\n';
    }
    out << '\n';
  }

  out << "## Normalization\n\n";
  out << "Scale range: [" << fmt6(report.params.scale_min) << ", "
      << fmt6(report.params.scale_max) << "]\n\n";
  for (const auto& [task, bounds] : report.params.bounds) {
    out << "- " << task.str() << ": clamp [" << fmt6(bounds.low) << ", "
        << fmt6(bounds.high) << "]\n";
  }
  out << '\n';

  out << "## Context\n\n";
  for (const std::string& line : report.context) {
    out << "- " << line << '\n';
  }
  return out.str();
}

std::string render_plotdata(const LifetimeReport& report) {
  // One row per experience, grouped by task in order of first appearance.
  std::vector<std::pair<std::string, std::string>> task_order;
  for (const auto& row : report.series) {
    const auto key = std::make_pair(row.task_name, row.task_variant);
    if (std::find(task_order.begin(), task_order.end(), key) ==
        task_order.end()) {
      task_order.push_back(key);
    }
  }
  std::ostringstream out;
  out << "task,exp_num,block_num,block_type,raw,processed\n";
  for (const auto& key : task_order) {
    for (const auto& row : report.series) {
      if (row.task_name != key.first || row.task_variant != key.second) {
        continue;
      }
      TaskKey task{row.task_name, row.task_variant};
      out << csv_quote(task.str()) << ',' << row.exp_num << ','
          << row.block_num << ',' << to_string(row.block_type) << ','
          << fmt17(row.raw) << ',' << fmt17(row.processed) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string render(const LifetimeReport& report, RenderFormat format) {
  switch (format) {
    case RenderFormat::json:
      return report_to_json(report).dump(2) + "\n";
    case RenderFormat::csv:
      return render_csv(report);
    case RenderFormat::markdown:
      return render_markdown(report);
    case RenderFormat::plotdata:
      return render_plotdata(report);
  }
  throw std::logic_error("unreachable");
}

AggregateReport aggregate(const std::vector<LifetimeReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate requires at least one report");
  }
  AggregateReport out;
  out.perf_key = reports.front().perf_key;
  for (const LifetimeReport& report : reports) {
    out.lifetime_ids.push_back(report.lifetime_id);
    if (report.perf_key != out.perf_key) {
      out.warnings.push_back("mixed perf_key: '" + report.perf_key +
                             "' in lifetime '" + report.lifetime_id +
                             "' differs from '" + out.perf_key + "'");
    }
  }
  for (std::string_view id : kAllMetrics) {
    std::vector<double> values;
    for (const LifetimeReport& report : reports) {
      for (const MetricResult& m : report.metrics) {
        if (m.name == id && m.value) values.push_back(*m.value);
      }
    }
    AggregateReport::MetricStats stats;
    stats.count = values.size();
    if (!values.empty()) {
      const bool all_equal = std::all_of(
          values.begin(), values.end(),
          [&](double v) { return v == values.front(); });
      if (all_equal) {
        // k copies of one report must reproduce it with std exactly 0.
        stats.mean = values.front();
        stats.std_dev = 0.0;
      } else {
        stats.mean = mean(values);
        double ss = 0.0;
        for (double v : values) ss += (v - *stats.mean) * (v - *stats.mean);
        stats.std_dev = std::sqrt(ss / static_cast<double>(values.size()));
      }
    }
    out.metrics[std::string(id)] = stats;
  }
  return out;
}

nlohmann::json aggregate_to_json(const AggregateReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = report.schema_version;
  doc["perf_key"] = report.perf_key;
  doc["lifetime_ids"] = report.lifetime_ids;
  nlohmann::json metrics;
  for (const auto& [id, stats] : report.metrics) {
    nlohmann::json entry;
    entry["count"] = stats.count;
    if (stats.mean) {
      entry["mean"] = *stats.mean;
      entry["std"] = *stats.std_dev;
    } else {
      entry["mean"] = nullptr;
      entry["std"] = nullptr;
    }
    metrics[id] = std::move(entry);
  }
  doc["metrics"] = std::move(metrics);
  doc["warnings"] = report.warnings;
  return doc;
}

}  // namespace lifemetrics
