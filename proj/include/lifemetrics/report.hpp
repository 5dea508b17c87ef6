#ifndef LIFEMETRICS_REPORT_HPP
#define LIFEMETRICS_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lifemetrics/engine.hpp"
#include "lifemetrics/preprocess.hpp"

namespace lifemetrics {

// Everything one lifetime produces: the scenario shape, the normalization
// parameters used (for reproducibility), every metric with its sub-values,
// a context section that is never empty, and the per-record raw/processed
// series for external plotting.
struct LifetimeReport {
  struct BlockBrief {
    std::int32_t block_num = 0;
    BlockType block_type = BlockType::learn;
    std::vector<std::string> tasks;
    std::size_t length = 0;
  };
  struct SeriesRow {
    std::int64_t exp_num = 0;
    std::int32_t block_num = 0;
    BlockType block_type = BlockType::learn;
    std::string task_name;
    std::string task_variant;
    double raw = 0.0;
    double processed = 0.0;
  };

  int schema_version = 1;
  std::string lifetime_id;
  std::string perf_key;
  std::vector<BlockBrief> blocks;
  std::size_t total_lx = 0;
  std::size_t total_ex = 0;
  std::vector<std::string> tasks;
  NormalizationParams params;
  PreprocessConfig config;  // for reproducing the normalization
  std::vector<MetricResult> metrics;
  std::vector<std::string> context;
  std::vector<SeriesRow> series;
};

LifetimeReport build_report(const PreprocessedLog& pre,
                            const std::vector<MetricResult>& metrics);

nlohmann::json report_to_json(const LifetimeReport& report);
LifetimeReport report_from_json(const nlohmann::json& doc);

enum class RenderFormat { json, csv, markdown, plotdata };
RenderFormat render_format_from_string(const std::string& name);

std::string render(const LifetimeReport& report, RenderFormat format);

// Per-metric statistics across cloned lifetimes. count is the number of
// lifetimes in which the metric was defined; std is the population standard
// deviation (a single lifetime aggregates with std 0).
struct AggregateReport {
  struct MetricStats {
    std::optional<double> mean;
    std::optional<double> std_dev;
    std::size_t count = 0;
  };

  int schema_version = 1;
  std::string perf_key;
  std::vector<std::string> lifetime_ids;
  std::map<std::string, MetricStats> metrics;
  std::vector<std::string> warnings;
};

AggregateReport aggregate(const std::vector<LifetimeReport>& reports);

nlohmann::json aggregate_to_json(const AggregateReport& report);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_REPORT_HPP
