#include "lifemetrics/core_metrics.hpp"

#include <algorithm>
#include <sstream>

#include "lifemetrics/validate.hpp"

namespace lifemetrics {

namespace {

std::string at_block(const TaskKey& task, std::int32_t block_num) {
  return task.str() + "@block" + std::to_string(block_num);
}

std::string pair_label(const TaskKey& from, const TaskKey& to) {
  return from.str() + "->" + to.str();
}

bool has_eval_blocks(const LifetimeLog& log) {
  for (const BlockInfo& block : log.blocks) {
    if (block.block_type == BlockType::eval) return true;
  }
  return false;
}

double eval_value(const std::vector<BlockSummary>& summaries,
                  std::size_t block_index, const TaskKey& task) {
  return summaries[block_index].per_task.at(task).value;
}

}  // namespace

std::vector<BlockSummary> summarize(const PreprocessedLog& pre) {
  std::vector<BlockSummary> summaries;
  summaries.reserve(pre.log.blocks.size());
  for (const BlockInfo& block : pre.log.blocks) {
    BlockSummary summary;
    summary.block_num = block.block_num;
    summary.block_type = block.block_type;
    for (const TaskKey& task : block.tasks) {
      std::vector<double> values;
      for (std::size_t i = block.first_record;
           i < block.first_record + block.length; ++i) {
        if (pre.log.records[i].task == task) {
          values.push_back(pre.processed[i]);
        }
      }
      TaskBlockStats stats;
      stats.count = values.size();
      stats.value = block.block_type == BlockType::learn
                        ? terminal_learning_performance(values)
                        : evaluation_performance(values);
      summary.per_task[task] = stats;
    }
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

MetricResult performance_maintenance(const PreprocessedLog& pre,
                                     const std::vector<BlockSummary>& summaries) {
  const auto items = maintenance_items(pre.log);
  if (items.empty()) {
    return MetricResult::undefined(
        kPerformanceMaintenance,
        has_eval_blocks(pre.log)
            ? "no evaluation block qualifies as a maintenance comparison"
            : "no evaluation blocks");
  }
  MetricResult result;
  result.name = std::string(kPerformanceMaintenance);
  std::map<TaskKey, std::vector<double>> per_task;
  for (const MaintenanceItem& item : items) {
    const double value = eval_value(summaries, item.eval_block, item.task) -
                         eval_value(summaries, item.ref_block, item.task);
    result.sub_values.emplace_back(
        at_block(item.task, pre.log.blocks[item.eval_block].block_num), value);
    per_task[item.task].push_back(value);
  }
  for (const auto& [task, values] : per_task) {
    result.details.emplace_back("task-mean:" + task.str(), mean(values));
  }
  result.finish_from_sub_values();
  return result;
}

MetricResult forward_transfer(const PreprocessedLog& pre,
                              const std::vector<BlockSummary>& summaries) {
  const auto windows = forward_transfer_windows(pre.log);
  if (windows.empty()) {
    return MetricResult::undefined(
        kForwardTransfer,
        has_eval_blocks(pre.log)
            ? "no task pair has a pre-learning evaluation bracket"
            : "no evaluation blocks");
  }
  const auto lbs_by_task = learn_blocks_by_task(pre.log);
  MetricResult result;
  result.name = std::string(kForwardTransfer);
  for (const FtWindow& w : windows) {
    const double before = eval_value(summaries, w.eb_before, w.target);
    const double after = eval_value(summaries, w.eb_after, w.target);
    const std::string label = pair_label(w.source, w.target);
    result.sub_values.emplace_back(label, contrast(after, before));
    if (before != 0.0) {
      result.details.emplace_back("ratio:" + label, after / before);
    }
    if (w.sources_in_window > 1) {
      result.notes.push_back(label + " confounded: " +
                             std::to_string(w.sources_in_window) +
                             " tasks learned between the evaluations");
    }
    // A very short source block cannot plausibly build a shared
    // representation; keep the value but flag it.
    const auto it = lbs_by_task.find(w.source);
    if (it != lbs_by_task.end()) {
      double total = 0.0;
      for (std::size_t bi : it->second) {
        for (const Regime& regime : pre.log.blocks[bi].regimes) {
          if (regime.task == w.source) {
            total += static_cast<double>(regime.last - regime.first + 1);
          }
        }
      }
      const double mean_len = total / static_cast<double>(it->second.size());
      if (static_cast<double>(w.source_lx_in_window) < 0.1 * mean_len) {
        result.notes.push_back(label + " based on a short learning block (" +
                               std::to_string(w.source_lx_in_window) +
                               " LXs); transfer may be uninformative");
      }
    }
  }
  result.finish_from_sub_values();
  return result;
}

MetricResult backward_transfer(const PreprocessedLog& pre,
                               const std::vector<BlockSummary>& summaries) {
  const auto occurrences = backward_transfer_occurrences(pre.log);
  if (occurrences.empty()) {
    return MetricResult::undefined(
        kBackwardTransfer,
        has_eval_blocks(pre.log)
            ? "no learned task is evaluated around another task's learning "
              "block"
            : "no evaluation blocks");
  }
  MetricResult result;
  result.name = std::string(kBackwardTransfer);
  std::map<TaskKey, std::vector<double>> per_affected;
  for (const BtOccurrence& occ : occurrences) {
    const double before = eval_value(summaries, occ.eb_before, occ.affected);
    const double after = eval_value(summaries, occ.eb_after, occ.affected);
    const double value = contrast(after, before);
    const std::string label = pair_label(occ.learned, occ.affected);
    if (occ.pair_occurrence == 1) {
      result.sub_values.emplace_back(label, value);
      if (before != 0.0) {
        result.details.emplace_back("ratio:" + label, after / before);
      }
    }
    result.details.emplace_back(
        label + "#" + std::to_string(occ.pair_occurrence), value);
    per_affected[occ.affected].push_back(value);
    if (occ.learned_in_interval > 1) {
      result.notes.push_back(label + "#" +
                             std::to_string(occ.pair_occurrence) +
                             " confounded: " +
                             std::to_string(occ.learned_in_interval) +
                             " tasks learned between the evaluations");
    }
  }
  for (const auto& [task, values] : per_affected) {
    result.details.emplace_back("task-mean:" + task.str(), mean(values));
  }
  result.finish_from_sub_values();
  return result;
}

}  // namespace lifemetrics
