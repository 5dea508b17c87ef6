#include "lifemetrics/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lifemetrics {

void PreprocessConfig::check() const {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw std::invalid_argument("window_fraction must be in (0, 1]");
  }
  if (window_cap < 1) {
    throw std::invalid_argument("window_cap must be >= 1");
  }
  if (!(clamp_low_pct >= 0.0 && clamp_high_pct <= 100.0 &&
        clamp_low_pct < clamp_high_pct)) {
    throw std::invalid_argument(
        "clamp percentiles must satisfy 0 <= low < high <= 100");
  }
  if (!(scale_min > 0.0)) {
    throw std::invalid_argument("scale_min must be > 0");
  }
  if (!(scale_min < scale_max)) {
    throw std::invalid_argument("scale_min must be < scale_max");
  }
}

std::size_t smoothing_window(std::size_t n, const PreprocessConfig& config) {
  const auto by_fraction = static_cast<std::size_t>(
      std::floor(config.window_fraction * static_cast<double>(n)));
  return std::max<std::size_t>(1, std::min(by_fraction, config.window_cap));
}

std::vector<double> smooth_block(const std::vector<double>& values,
                                 const PreprocessConfig& config) {
  if (values.empty()) {
    throw std::invalid_argument("smooth_block: empty input");
  }
  const std::size_t n = values.size();
  const std::size_t window = smoothing_window(n, config);
  if (window == 1) return values;

  const std::size_t left = (window - 1) / 2;
  const std::size_t right = window - 1 - left;
  std::vector<double> padded;
  padded.reserve(n + window - 1);
  padded.insert(padded.end(), left, values.front());
  padded.insert(padded.end(), values.begin(), values.end());
  padded.insert(padded.end(), right, values.back());

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < window; ++j) sum += padded[i + j];
    out[i] = sum / static_cast<double>(window);
  }
  return out;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) {
    throw std::invalid_argument("percentile: empty input");
  }
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values.front();
  const double rank = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
  const double lo = std::floor(rank);
  const std::size_t i = static_cast<std::size_t>(lo);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + (rank - lo) * (values[i + 1] - values[i]);
}

TaskBounds compute_clamp_bounds(const std::vector<double>& values,
                                const PreprocessConfig& config) {
  return {percentile(values, config.clamp_low_pct),
          percentile(values, config.clamp_high_pct)};
}

double clamp_and_scale(double value, const TaskBounds& bounds,
                       const PreprocessConfig& config) {
  if (bounds.low >= bounds.high) return config.scale_min;
  const double clipped = std::clamp(value, bounds.low, bounds.high);
  // Ratio first: it is exactly 1 at the upper bound, keeping outputs
  // inside [scale_min, scale_max].
  const double ratio = (clipped - bounds.low) / (bounds.high - bounds.low);
  return config.scale_min + ratio * (config.scale_max - config.scale_min);
}

std::vector<double> clamp_and_scale(const std::vector<double>& values,
                                    const TaskBounds& bounds,
                                    const PreprocessConfig& config) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(clamp_and_scale(v, bounds, config));
  return out;
}

std::vector<std::pair<std::size_t, std::vector<double>>>
PreprocessedLog::task_series(const TaskKey& task, BlockType type) const {
  std::vector<std::pair<std::size_t, std::vector<double>>> series;
  for (std::size_t b = 0; b < log.blocks.size(); ++b) {
    const BlockInfo& block = log.blocks[b];
    if (block.block_type != type || !block.contains(task)) continue;
    std::vector<double> values;
    for (std::size_t i = block.first_record;
         i < block.first_record + block.length; ++i) {
      if (log.records[i].task == task) values.push_back(processed[i]);
    }
    series.emplace_back(b, std::move(values));
  }
  return series;
}

std::vector<double> PreprocessedLog::concat_learn_series(
    const TaskKey& task) const {
  std::vector<double> out;
  for (auto& [block, values] : task_series(task, BlockType::learn)) {
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

PreprocessedLog preprocess(const LifetimeLog& log, const SteStore& ste,
                           const PreprocessConfig& config) {
  config.check();

  PreprocessedLog out;
  out.log = log;
  out.config = config;
  out.params.scale_min = config.scale_min;
  out.params.scale_max = config.scale_max;

  const std::size_t n = log.records.size();
  out.raw.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.raw[i] = log.perf(i);

  // Step 1: smooth each task's sub-series within each learning block.
  std::vector<double> smoothed = out.raw;
  std::map<TaskKey, std::vector<double>> value_pool;
  for (const BlockInfo& block : log.blocks) {
    if (block.block_type != BlockType::learn) continue;
    for (const TaskKey& task : block.tasks) {
      std::vector<std::size_t> idx;
      for (std::size_t i = block.first_record;
           i < block.first_record + block.length; ++i) {
        if (log.records[i].task == task) idx.push_back(i);
      }
      std::vector<double> values;
      values.reserve(idx.size());
      for (std::size_t i : idx) values.push_back(out.raw[i]);
      std::vector<double> sm = smooth_block(values, config);
      for (std::size_t k = 0; k < idx.size(); ++k) smoothed[idx[k]] = sm[k];
      auto& pool = value_pool[task];
      pool.insert(pool.end(), sm.begin(), sm.end());
    }
  }

  // STE curves are smoothed once each, with the window from their own length.
  std::map<TaskKey, std::vector<ProcessedSteCurve>> ste_smoothed;
  for (const auto& [task, curves] : ste.curves) {
    for (const SteCurve& curve : curves) {
      ProcessedSteCurve pc;
      pc.source_id = curve.source_id;
      pc.raw = curve.values;
      pc.processed = smooth_block(curve.values, config);
      auto& pool = value_pool[task];
      pool.insert(pool.end(), pc.processed.begin(), pc.processed.end());
      ste_smoothed[task].push_back(std::move(pc));
    }
  }

  // Step 2: per-variant percentile bounds over every value of the variant:
  // smoothed learning data (lifetime and STE) plus raw evaluation values.
  // Pre-learning evaluations must land inside the bounds or the jumpstart
  // transfer contrasts degenerate against the clamp floor.
  for (std::size_t i = 0; i < n; ++i) {
    if (log.records[i].block_type == BlockType::eval) {
      value_pool[log.records[i].task].push_back(out.raw[i]);
    }
  }
  for (const auto& [task, pool] : value_pool) {
    out.params.bounds[task] = compute_clamp_bounds(pool, config);
  }

  // Step 3: clamp and scale everything.
  out.processed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TaskBounds& bounds = out.params.bounds.at(log.records[i].task);
    out.processed[i] = clamp_and_scale(smoothed[i], bounds, config);
  }
  for (auto& [task, curves] : ste_smoothed) {
    const TaskBounds& bounds = out.params.bounds.at(task);
    for (ProcessedSteCurve& pc : curves) {
      pc.processed = clamp_and_scale(pc.processed, bounds, config);
    }
  }
  out.ste = std::move(ste_smoothed);
  return out;
}

}  // namespace lifemetrics
