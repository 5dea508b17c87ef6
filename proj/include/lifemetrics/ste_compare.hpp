#ifndef LIFEMETRICS_STE_COMPARE_HPP
#define LIFEMETRICS_STE_COMPARE_HPP

#include <cstddef>
#include <vector>

#include "lifemetrics/metrics.hpp"
#include "lifemetrics/preprocess.hpp"

namespace lifemetrics {

struct SaturationResult {
  double value = 0.0;    // max of the trailing rolling mean
  std::size_t ets = 0;   // 1-based index of its first attainment
};

// Trailing rolling mean of length min(window, values seen so far) at each
// position; the max and the earliest position attaining it. Throws on empty
// input or window == 0.
SaturationResult saturation(const std::vector<double>& values,
                            std::size_t window);

// Ratio of the lifetime learning-value sum to the STE's sum over the common
// prefix length, per task, averaged over that task's STE curves.
MetricResult relative_performance(const PreprocessedLog& pre);

// (saturation value ratio) x (experience-to-saturation ratio) against the
// STE, per task; tasks whose curves do not reach steady state are skipped.
MetricResult sample_efficiency(const PreprocessedLog& pre);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_STE_COMPARE_HPP
