#ifndef LIFEMETRICS_SUPPLEMENTAL_HPP
#define LIFEMETRICS_SUPPLEMENTAL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "lifemetrics/core_metrics.hpp"
#include "lifemetrics/metrics.hpp"
#include "lifemetrics/preprocess.hpp"

namespace lifemetrics {

// LXs needed to regain the prior terminal performance inside a learning
// block: 0 when the block starts at or above it, the first 1-based index of
// a value at or above it otherwise, block length + 1 when it never recovers.
std::size_t recovery_time(const std::vector<double>& block_values,
                          double prior_tlp);

// Median of all pairwise slopes (y_j - y_i) / (x_j - x_i) over i < j with
// x_i != x_j; an even count averages the two middle slopes. Throws
// std::invalid_argument without two distinct x values.
double theil_sen_slope(const std::vector<std::pair<double, double>>& points);

// Ordinary least squares slope. Throws without two distinct x values.
double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Zero-slope tolerance for cumulative gain's trichotomy, in normalized
// units per LX.
inline constexpr double kGainSlopeEpsilon = 1e-3;

// Negated Theil-Sen slope of (learning-block ordinal, recovery time) per
// task, from each task's second learning block onward.
MetricResult performance_recovery(const PreprocessedLog& pre,
                                  const std::vector<BlockSummary>& summaries);

// Mean of per-learning-block trend gains in {-1, 0, +1}.
MetricResult cumulative_gain(const PreprocessedLog& pre);

// Mean within-block slope after each change, relative to the lifetime-wide
// slope over all learning values.
MetricResult learn_burn(const PreprocessedLog& pre);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_SUPPLEMENTAL_HPP
