#ifndef LIFEMETRICS_VALIDATE_HPP
#define LIFEMETRICS_VALIDATE_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lifemetrics/types.hpp"

namespace lifemetrics {

// Structural findings about a parsed log: degenerate blocks, coverage gaps,
// and which metrics the block structure supports. Findings are informative,
// never failures.
struct ValidationReport {
  struct Finding {
    std::string code;
    std::string message;
  };
  struct Eligibility {
    bool computable = false;
    std::string reason;  // why not, or a caveat (e.g. "requires STE curves")
  };

  std::vector<Finding> findings;
  std::map<std::string, Eligibility> metrics;  // canonical metric id -> state

  std::string summary() const;
};

ValidationReport validate(const LifetimeLog& log);

// --- structural scanners shared by validate() and the metric computations ---
// Block positions are indices into LifetimeLog::blocks.

// One forward-transfer opportunity: the target task is evaluated at
// eb_before, the source task is learned in between, the target is evaluated
// again at eb_after, and the target has never been learned up to eb_after.
// Only the first window per (source, target) pair is returned.
struct FtWindow {
  TaskKey source;
  TaskKey target;
  std::size_t eb_before = 0;
  std::size_t eb_after = 0;
  std::size_t sources_in_window = 1;   // distinct tasks learned in the window
  std::size_t source_lx_in_window = 0; // source's LX count inside the window
};
std::vector<FtWindow> forward_transfer_windows(const LifetimeLog& log);

// One backward-transfer occurrence: the affected task (already learned
// before eb_before) is evaluated at eb_before and eb_after, consecutive
// among its evaluation blocks, with the learned task trained in between and
// the affected task itself not relearned in the interval.
struct BtOccurrence {
  TaskKey learned;
  TaskKey affected;
  std::size_t eb_before = 0;
  std::size_t eb_after = 0;
  std::size_t pair_occurrence = 1;      // 1-based, per (learned, affected)
  std::size_t learned_in_interval = 1;  // distinct tasks learned in between
};
std::vector<BtOccurrence> backward_transfer_occurrences(const LifetimeLog& log);

// One maintenance comparison for a task: its evaluation at eval_block
// against the reference evaluation ref_block, the evaluation block
// immediately following the task's most recent learning block (next
// eval block covering the task with no intervening learning block that
// contains it). Reference blocks themselves are excluded.
struct MaintenanceItem {
  TaskKey task;
  std::size_t eval_block = 0;
  std::size_t ref_block = 0;
};
std::vector<MaintenanceItem> maintenance_items(const LifetimeLog& log);

// Learning-block indices per task, lifetime order (used by the recovery and
// STE metrics' eligibility rules).
std::map<TaskKey, std::vector<std::size_t>> learn_blocks_by_task(
    const LifetimeLog& log);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_VALIDATE_HPP
