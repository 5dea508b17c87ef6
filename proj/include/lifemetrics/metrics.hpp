#ifndef LIFEMETRICS_METRICS_HPP
#define LIFEMETRICS_METRICS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lifemetrics {

// Canonical metric identifiers, in reporting order.
inline constexpr std::string_view kPerformanceMaintenance = "performance_maintenance";
inline constexpr std::string_view kForwardTransfer = "forward_transfer";
inline constexpr std::string_view kBackwardTransfer = "backward_transfer";
inline constexpr std::string_view kRelativePerformance = "relative_performance";
inline constexpr std::string_view kSampleEfficiency = "sample_efficiency";
inline constexpr std::string_view kPerformanceRecovery = "performance_recovery";
inline constexpr std::string_view kCumulativeGain = "cumulative_gain";
inline constexpr std::string_view kLearnBurn = "learn_burn";

inline constexpr std::string_view kAllMetrics[] = {
    kPerformanceMaintenance, kForwardTransfer,    kBackwardTransfer,
    kRelativePerformance,    kSampleEfficiency,   kPerformanceRecovery,
    kCumulativeGain,         kLearnBurn,
};

// One metric's lifetime scalar plus the sub-values it aggregates.
// Invariant: when sub_values is non-empty, value equals their mean; when
// value is absent, undefined_reason says why. `details` carries informative
// extras (later transfer occurrences, per-task averages, raw-value ratios)
// that do not enter the lifetime aggregation.
struct MetricResult {
  std::string name;
  std::optional<double> value;
  std::string undefined_reason;
  std::vector<std::pair<std::string, double>> sub_values;
  std::vector<std::pair<std::string, double>> details;
  std::vector<std::string> notes;

  static MetricResult undefined(std::string_view name, std::string reason) {
    MetricResult r;
    r.name = std::string(name);
    r.undefined_reason = std::move(reason);
    return r;
  }

  // Sets value to the mean of sub_values.
  void finish_from_sub_values();
};

// (a - b) / (a + b); defined for b == 0, throws std::domain_error when
// a + b == 0 (cannot happen on preprocessed data, which is >= scale_min > 0).
double contrast(double a, double b);

double mean(const std::vector<double>& values);  // throws on empty

// Mean of the final max(1, ceil(0.10 * n)) values.
double terminal_learning_performance(const std::vector<double>& block_values);

// Mean of all of a task's values within one evaluation block.
double evaluation_performance(const std::vector<double>& block_values);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_METRICS_HPP
