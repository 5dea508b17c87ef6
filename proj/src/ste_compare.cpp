#include "lifemetrics/ste_compare.hpp"

#include <algorithm>
#include <stdexcept>

#include "lifemetrics/validate.hpp"

namespace lifemetrics {

namespace {

double sum_prefix(const std::vector<double>& values, std::size_t m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += values[i];
  return sum;
}

// Raw learning values of one task, lifetime order.
std::vector<double> raw_learn_series(const PreprocessedLog& pre,
                                     const TaskKey& task) {
  std::vector<double> out;
  for (const BlockInfo& block : pre.log.blocks) {
    if (block.block_type != BlockType::learn || !block.contains(task)) continue;
    for (std::size_t i = block.first_record;
         i < block.first_record + block.length; ++i) {
      if (pre.log.records[i].task == task) out.push_back(pre.raw[i]);
    }
  }
  return out;
}

// A curve counts as saturated when its final rolling mean sits within 5% of
// the normalized range span below the saturation value.
bool saturated(const std::vector<double>& values, std::size_t window,
               const SaturationResult& sat, const PreprocessedLog& pre) {
  const std::size_t tail = std::min(window, values.size());
  double sum = 0.0;
  for (std::size_t i = values.size() - tail; i < values.size(); ++i) {
    sum += values[i];
  }
  const double final_mean = sum / static_cast<double>(tail);
  const double span = pre.params.scale_max - pre.params.scale_min;
  return sat.value - final_mean <= 0.05 * span;
}

}  // namespace

SaturationResult saturation(const std::vector<double>& values,
                            std::size_t window) {
  if (values.empty()) throw std::invalid_argument("saturation: empty input");
  if (window == 0) throw std::invalid_argument("saturation: window must be >= 1");
  SaturationResult best;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    const std::size_t w = std::min(window, i);
    double sum = 0.0;
    for (std::size_t j = i - w; j < i; ++j) sum += values[j];
    const double rolling = sum / static_cast<double>(w);
    if (best.ets == 0 || rolling > best.value) {
      best.value = rolling;
      best.ets = i;
    }
  }
  return best;
}

MetricResult relative_performance(const PreprocessedLog& pre) {
  const auto lbs_by_task = learn_blocks_by_task(pre.log);
  if (lbs_by_task.empty()) {
    return MetricResult::undefined(kRelativePerformance, "no learning blocks");
  }
  MetricResult result;
  result.name = std::string(kRelativePerformance);
  for (const auto& [task, lbs] : lbs_by_task) {
    const auto it = pre.ste.find(task);
    if (it == pre.ste.end() || it->second.empty()) {
      result.notes.push_back("no STE curves for " + task.str() + "; skipped");
      continue;
    }
    const std::vector<double> l2 = pre.concat_learn_series(task);
    const std::vector<double> l2_raw = raw_learn_series(pre, task);
    std::vector<double> per_curve;
    double raw_ratio_sum = 0.0;
    std::size_t raw_ratio_count = 0;
    for (const ProcessedSteCurve& curve : it->second) {
      const std::size_t m = std::min(l2.size(), curve.processed.size());
      per_curve.push_back(sum_prefix(l2, m) / sum_prefix(curve.processed, m));
      const double raw_denom = sum_prefix(curve.raw, m);
      if (raw_denom != 0.0) {
        raw_ratio_sum += sum_prefix(l2_raw, m) / raw_denom;
        ++raw_ratio_count;
      }
    }
    result.sub_values.emplace_back(task.str(), mean(per_curve));
    if (raw_ratio_count > 0) {
      result.details.emplace_back(
          "raw-ratio:" + task.str(),
          raw_ratio_sum / static_cast<double>(raw_ratio_count));
    }
  }
  for (const auto& [task, curves] : pre.ste) {
    if (lbs_by_task.find(task) == lbs_by_task.end()) {
      result.notes.push_back("STE provided for " + task.str() +
                             " but the task is never learned");
    }
  }
  if (result.sub_values.empty()) {
    auto undefined = MetricResult::undefined(
        kRelativePerformance, "no STE curves available for any learned task");
    undefined.notes = result.notes;
    return undefined;
  }
  result.finish_from_sub_values();
  return result;
}

MetricResult sample_efficiency(const PreprocessedLog& pre) {
  const auto lbs_by_task = learn_blocks_by_task(pre.log);
  if (lbs_by_task.empty()) {
    return MetricResult::undefined(kSampleEfficiency, "no learning blocks");
  }
  MetricResult result;
  result.name = std::string(kSampleEfficiency);
  for (const auto& [task, lbs] : lbs_by_task) {
    const auto it = pre.ste.find(task);
    if (it == pre.ste.end() || it->second.empty()) {
      result.notes.push_back("no STE curves for " + task.str() + "; skipped");
      continue;
    }
    const std::vector<double> l2 = pre.concat_learn_series(task);
    const std::size_t l2_window = smoothing_window(l2.size(), pre.config);
    const SaturationResult l2_sat = saturation(l2, l2_window);
    if (!saturated(l2, l2_window, l2_sat, pre)) {
      result.notes.push_back(task.str() +
                             " lifetime curve is not saturated; skipped");
      continue;
    }
    std::vector<double> per_curve;
    for (const ProcessedSteCurve& curve : it->second) {
      const std::size_t window =
          smoothing_window(curve.processed.size(), pre.config);
      const SaturationResult ste_sat = saturation(curve.processed, window);
      if (!saturated(curve.processed, window, ste_sat, pre)) {
        result.notes.push_back("STE curve " + curve.source_id + " for " +
                               task.str() + " is not saturated; skipped");
        continue;
      }
      per_curve.push_back((l2_sat.value / ste_sat.value) *
                          (static_cast<double>(ste_sat.ets) /
                           static_cast<double>(l2_sat.ets)));
      result.details.emplace_back("ets:" + task.str() + "/" + curve.source_id,
                                  static_cast<double>(ste_sat.ets));
    }
    if (per_curve.empty()) continue;
    result.sub_values.emplace_back(task.str(), mean(per_curve));
    result.details.emplace_back("ets:" + task.str(),
                                static_cast<double>(l2_sat.ets));
    result.details.emplace_back("sat:" + task.str(), l2_sat.value);
  }
  if (result.sub_values.empty()) {
    auto undefined = MetricResult::undefined(
        kSampleEfficiency,
        "no task has both STE curves and saturated performance");
    undefined.notes = result.notes;
    return undefined;
  }
  result.finish_from_sub_values();
  return result;
}

}  // namespace lifemetrics
