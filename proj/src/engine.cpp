#include "lifemetrics/engine.hpp"

namespace lifemetrics {

std::vector<MetricResult> compute_all_metrics(const PreprocessedLog& pre) {
  const std::vector<BlockSummary> summaries = summarize(pre);
  std::vector<MetricResult> results;
  results.reserve(8);
  results.push_back(performance_maintenance(pre, summaries));
  results.push_back(forward_transfer(pre, summaries));
  results.push_back(backward_transfer(pre, summaries));
  results.push_back(relative_performance(pre));
  results.push_back(sample_efficiency(pre));
  results.push_back(performance_recovery(pre, summaries));
  results.push_back(cumulative_gain(pre));
  results.push_back(learn_burn(pre));
  return results;
}

}  // namespace lifemetrics
