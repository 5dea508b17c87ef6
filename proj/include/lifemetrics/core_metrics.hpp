#ifndef LIFEMETRICS_CORE_METRICS_HPP
#define LIFEMETRICS_CORE_METRICS_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "lifemetrics/metrics.hpp"
#include "lifemetrics/preprocess.hpp"

namespace lifemetrics {

// Per-block, per-task summary over processed values: terminal learning
// performance for learning blocks, mean evaluation performance for
// evaluation blocks.
struct TaskBlockStats {
  double value = 0.0;
  std::size_t count = 0;  // experiences of the task in the block
};

struct BlockSummary {
  std::int32_t block_num = 0;
  BlockType block_type = BlockType::learn;
  std::map<TaskKey, TaskBlockStats> per_task;
};

// One summary per block, aligned with log.blocks.
std::vector<BlockSummary> summarize(const PreprocessedLog& pre);

// Mean difference between each task's evaluation performances and the
// evaluation immediately following its most recent learning block.
MetricResult performance_maintenance(const PreprocessedLog& pre,
                                     const std::vector<BlockSummary>& summaries);

// Contrast of a new task's evaluations bracketing another task's learning
// block, once per ordered pair, before the new task is ever learned.
MetricResult forward_transfer(const PreprocessedLog& pre,
                              const std::vector<BlockSummary>& summaries);

// Contrast of a learned task's consecutive evaluations around another
// task's learning block. The lifetime value averages each pair's first
// occurrence; later occurrences are kept in details.
MetricResult backward_transfer(const PreprocessedLog& pre,
                               const std::vector<BlockSummary>& summaries);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_CORE_METRICS_HPP
