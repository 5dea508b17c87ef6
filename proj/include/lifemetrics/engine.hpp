#ifndef LIFEMETRICS_ENGINE_HPP
#define LIFEMETRICS_ENGINE_HPP

#include <vector>

#include "lifemetrics/core_metrics.hpp"
#include "lifemetrics/metrics.hpp"
#include "lifemetrics/preprocess.hpp"
#include "lifemetrics/ste_compare.hpp"
#include "lifemetrics/supplemental.hpp"

namespace lifemetrics {

// Every lifetime metric in canonical order: PM, FT, BT, RP, SE, PR, CG, LB.
// Metrics the structure or data cannot support come back undefined with a
// reason, never missing.
std::vector<MetricResult> compute_all_metrics(const PreprocessedLog& pre);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_ENGINE_HPP
