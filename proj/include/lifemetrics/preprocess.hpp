#ifndef LIFEMETRICS_PREPROCESS_HPP
#define LIFEMETRICS_PREPROCESS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lifemetrics/ste_store.hpp"
#include "lifemetrics/types.hpp"

namespace lifemetrics {

struct PreprocessConfig {
  double window_fraction = 0.2;
  std::size_t window_cap = 100;
  double clamp_low_pct = 10.0;
  double clamp_high_pct = 90.0;
  double scale_min = 1.0;
  double scale_max = 101.0;

  // Throws std::invalid_argument when a field is out of range.
  void check() const;
};

// Flat smoothing window length: max(1, min(floor(window_fraction * n),
// window_cap)).
std::size_t smoothing_window(std::size_t n, const PreprocessConfig& config);

// Moving average with a flat window. The input is replicate-padded with
// floor((L-1)/2) leading and ceil((L-1)/2) trailing copies of its edge
// values so the output has the input's length. Throws on empty input.
std::vector<double> smooth_block(const std::vector<double>& values,
                                 const PreprocessConfig& config);

// Empirical percentile with linear interpolation between the closest order
// statistics (rank h = (n-1) * pct / 100 on the sorted values).
double percentile(std::vector<double> values, double pct);

struct TaskBounds {
  double low = 0.0;
  double high = 0.0;
};

// Clamp bounds for one task variant over every value supplied (the
// variant's smoothed learning data, its raw evaluation values, and all of
// its STE curves).
TaskBounds compute_clamp_bounds(const std::vector<double>& values,
                                const PreprocessConfig& config);

// Clips into [low, high], then maps affinely so low -> scale_min and
// high -> scale_max. A collapsed range (low == high) maps to scale_min.
double clamp_and_scale(double value, const TaskBounds& bounds,
                       const PreprocessConfig& config);
std::vector<double> clamp_and_scale(const std::vector<double>& values,
                                    const TaskBounds& bounds,
                                    const PreprocessConfig& config);

struct NormalizationParams {
  std::map<TaskKey, TaskBounds> bounds;
  double scale_min = 1.0;
  double scale_max = 101.0;
};

struct ProcessedSteCurve {
  std::string source_id;
  std::vector<double> raw;
  std::vector<double> processed;
};

// The lifetime log with its perf_key values run through the pipeline
// (smooth learning blocks -> per-variant clamp bounds -> scale), raw values
// retained alongside. STE curves are carried through the same pipeline.
struct PreprocessedLog {
  LifetimeLog log;
  std::vector<double> raw;        // perf_key value per record
  std::vector<double> processed;  // pipeline output per record
  NormalizationParams params;
  PreprocessConfig config;
  std::map<TaskKey, std::vector<ProcessedSteCurve>> ste;

  // Processed values of one task per qualifying block; .first is the index
  // into log.blocks.
  std::vector<std::pair<std::size_t, std::vector<double>>> task_series(
      const TaskKey& task, BlockType type) const;

  // Concatenation of the task's learning-block values in lifetime order.
  std::vector<double> concat_learn_series(const TaskKey& task) const;
};

// Pipeline order is significant: smoothing happens on raw learning curves,
// bounds are computed from the smoothed data, and scaling happens last.
// Evaluation values are clamped and scaled with their task's bounds but are
// not smoothed (evaluation-block means are already aggregates).
PreprocessedLog preprocess(const LifetimeLog& log, const SteStore& ste,
                           const PreprocessConfig& config);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_PREPROCESS_HPP
