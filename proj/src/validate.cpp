#include "lifemetrics/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lifemetrics/metrics.hpp"

namespace lifemetrics {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// LX/EX count of one task inside one block.
std::size_t task_count_in_block(const LifetimeLog& log, std::size_t block_index,
                                const TaskKey& task) {
  const BlockInfo& block = log.blocks[block_index];
  std::size_t count = 0;
  for (const Regime& regime : block.regimes) {
    if (regime.task == task) count += regime.last - regime.first + 1;
  }
  return count;
}

std::vector<TaskKey> all_tasks(const LifetimeLog& log) {
  std::vector<TaskKey> tasks;
  for (const BlockInfo& block : log.blocks) {
    for (const TaskKey& task : block.tasks) {
      if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) {
        tasks.push_back(task);
      }
    }
  }
  return tasks;
}

}  // namespace

std::vector<FtWindow> forward_transfer_windows(const LifetimeLog& log) {
  std::vector<FtWindow> windows;
  std::set<std::pair<TaskKey, TaskKey>> seen_pairs;
  for (const TaskKey& target : all_tasks(log)) {
    std::size_t prev_eb = npos;
    // Distinct tasks learned since the last evaluation of the target, in
    // order of first appearance, with their LX counts inside the window.
    std::vector<std::pair<TaskKey, std::size_t>> learned_since;
    for (std::size_t bi = 0; bi < log.blocks.size(); ++bi) {
      const BlockInfo& block = log.blocks[bi];
      if (block.block_type == BlockType::learn) {
        if (block.contains(target)) break;  // target no longer new
        if (prev_eb == npos) continue;      // no pre-learning evaluation yet
        for (const TaskKey& task : block.tasks) {
          auto it = std::find_if(learned_since.begin(), learned_since.end(),
                                 [&](const auto& p) { return p.first == task; });
          const std::size_t count = task_count_in_block(log, bi, task);
          if (it == learned_since.end()) {
            learned_since.emplace_back(task, count);
          } else {
            it->second += count;
          }
        }
      } else if (block.contains(target)) {
        if (prev_eb != npos && !learned_since.empty()) {
          for (const auto& [source, lx] : learned_since) {
            if (!seen_pairs.insert({source, target}).second) continue;
            FtWindow w;
            w.source = source;
            w.target = target;
            w.eb_before = prev_eb;
            w.eb_after = bi;
            w.sources_in_window = learned_since.size();
            w.source_lx_in_window = lx;
            windows.push_back(std::move(w));
          }
        }
        prev_eb = bi;
        learned_since.clear();
      }
    }
  }
  return windows;
}

std::vector<BtOccurrence> backward_transfer_occurrences(const LifetimeLog& log) {
  std::vector<BtOccurrence> occurrences;
  std::map<std::pair<TaskKey, TaskKey>, std::size_t> pair_counts;
  for (const TaskKey& affected : all_tasks(log)) {
    std::size_t first_learn = npos;
    std::vector<std::size_t> evals;
    for (std::size_t bi = 0; bi < log.blocks.size(); ++bi) {
      const BlockInfo& block = log.blocks[bi];
      if (!block.contains(affected)) continue;
      if (block.block_type == BlockType::learn) {
        if (first_learn == npos) first_learn = bi;
      } else {
        evals.push_back(bi);
      }
    }
    for (std::size_t k = 0; k + 1 < evals.size(); ++k) {
      const std::size_t e1 = evals[k];
      const std::size_t e2 = evals[k + 1];
      if (first_learn == npos || first_learn > e1) continue;  // not yet learned
      bool relearned = false;
      std::vector<TaskKey> learned;
      for (std::size_t bi = e1 + 1; bi < e2; ++bi) {
        const BlockInfo& block = log.blocks[bi];
        if (block.block_type != BlockType::learn) continue;
        if (block.contains(affected)) {
          relearned = true;
          break;
        }
        for (const TaskKey& task : block.tasks) {
          if (std::find(learned.begin(), learned.end(), task) == learned.end()) {
            learned.push_back(task);
          }
        }
      }
      if (relearned || learned.empty()) continue;
      for (const TaskKey& task : learned) {
        BtOccurrence occ;
        occ.learned = task;
        occ.affected = affected;
        occ.eb_before = e1;
        occ.eb_after = e2;
        occ.pair_occurrence = ++pair_counts[{task, affected}];
        occ.learned_in_interval = learned.size();
        occurrences.push_back(std::move(occ));
      }
    }
  }
  return occurrences;
}

std::vector<MaintenanceItem> maintenance_items(const LifetimeLog& log) {
  std::vector<MaintenanceItem> items;
  for (const TaskKey& task : all_tasks(log)) {
    std::vector<std::size_t> lbs;
    std::vector<std::size_t> ebs;
    for (std::size_t bi = 0; bi < log.blocks.size(); ++bi) {
      if (!log.blocks[bi].contains(task)) continue;
      (log.blocks[bi].block_type == BlockType::learn ? lbs : ebs).push_back(bi);
    }
    // Reference evaluation for each learning block: the next evaluation
    // block covering the task before it is learned again.
    std::map<std::size_t, std::size_t> ref_of;
    for (std::size_t lb : lbs) {
      std::size_t ref = npos;
      for (std::size_t bi = lb + 1; bi < log.blocks.size(); ++bi) {
        const BlockInfo& block = log.blocks[bi];
        if (!block.contains(task)) continue;
        if (block.block_type == BlockType::learn) break;
        ref = bi;
        break;
      }
      ref_of[lb] = ref;
    }
    for (std::size_t eb : ebs) {
      auto it = std::find_if(lbs.rbegin(), lbs.rend(),
                             [&](std::size_t lb) { return lb < eb; });
      if (it == lbs.rend()) continue;  // pre-learning evaluation
      const std::size_t ref = ref_of[*it];
      if (ref == npos || ref == eb) continue;  // no baseline / is the baseline
      items.push_back({task, eb, ref});
    }
  }
  return items;
}

std::map<TaskKey, std::vector<std::size_t>> learn_blocks_by_task(
    const LifetimeLog& log) {
  std::map<TaskKey, std::vector<std::size_t>> out;
  for (std::size_t bi = 0; bi < log.blocks.size(); ++bi) {
    if (log.blocks[bi].block_type != BlockType::learn) continue;
    for (const TaskKey& task : log.blocks[bi].tasks) {
      out[task].push_back(bi);
    }
  }
  return out;
}

ValidationReport validate(const LifetimeLog& log) {
  ValidationReport report;
  const std::vector<TaskKey> tasks = all_tasks(log);

  std::size_t learn_blocks = 0;
  std::size_t eval_blocks = 0;
  for (std::size_t bi = 0; bi < log.blocks.size(); ++bi) {
    const BlockInfo& block = log.blocks[bi];
    if (block.block_type == BlockType::learn) {
      ++learn_blocks;
      for (const TaskKey& task : block.tasks) {
        const std::size_t count = task_count_in_block(log, bi, task);
        if (count < 2) {
          report.findings.push_back(
              {"degenerate-tlp",
               "learning block " + std::to_string(block.block_num) + " has " +
                   std::to_string(count) + " experience(s) of " + task.str() +
                   "; terminal performance is degenerate"});
        }
      }
    } else {
      ++eval_blocks;
      std::vector<std::string> missing;
      for (const TaskKey& task : tasks) {
        if (!block.contains(task)) missing.push_back(task.str());
      }
      if (!missing.empty()) {
        std::ostringstream msg;
        msg << "evaluation block " << block.block_num
            << " does not cover: ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
          if (i) msg << ", ";
          msg << missing[i];
        }
        report.findings.push_back({"eval-coverage", msg.str()});
      }
    }
  }

  const auto lbs_by_task = learn_blocks_by_task(log);
  for (const TaskKey& task : tasks) {
    if (lbs_by_task.find(task) == lbs_by_task.end()) {
      report.findings.push_back(
          {"never-learned", "task " + task.str() + " is never learned"});
    }
    bool evaluated = false;
    for (const BlockInfo& block : log.blocks) {
      if (block.block_type == BlockType::eval && block.contains(task)) {
        evaluated = true;
        break;
      }
    }
    if (!evaluated) {
      report.findings.push_back(
          {"never-evaluated", "task " + task.str() + " is never evaluated"});
    }
  }

  auto set_metric = [&](std::string_view id, bool ok, std::string reason) {
    report.metrics[std::string(id)] = {ok, std::move(reason)};
  };

  if (eval_blocks == 0) {
    set_metric(kPerformanceMaintenance, false, "no evaluation blocks");
    set_metric(kForwardTransfer, false, "no evaluation blocks");
    set_metric(kBackwardTransfer, false, "no evaluation blocks");
  } else {
    const auto pm = maintenance_items(log);
    set_metric(kPerformanceMaintenance, !pm.empty(),
               pm.empty() ? "no evaluation block qualifies as a maintenance "
                            "comparison"
                          : "");
    const auto ft = forward_transfer_windows(log);
    if (ft.empty()) {
      set_metric(kForwardTransfer, false,
                 "no task pair has a pre-learning evaluation bracket");
    } else {
      std::ostringstream pairs;
      for (std::size_t i = 0; i < ft.size(); ++i) {
        if (i) pairs << ", ";
        pairs << ft[i].source.str() << "->" << ft[i].target.str();
      }
      set_metric(kForwardTransfer, true, "pairs: " + pairs.str());
    }
    const auto bt = backward_transfer_occurrences(log);
    if (bt.empty()) {
      set_metric(kBackwardTransfer, false,
                 "no learned task is evaluated around another task's "
                 "learning block");
    } else {
      std::set<std::pair<TaskKey, TaskKey>> pairs;
      for (const auto& occ : bt) pairs.insert({occ.learned, occ.affected});
      std::ostringstream text;
      bool first = true;
      for (const auto& [learned, affected] : pairs) {
        if (!first) text << ", ";
        first = false;
        text << learned.str() << "->" << affected.str();
      }
      set_metric(kBackwardTransfer, true, "pairs: " + text.str());
    }
  }

  if (learn_blocks == 0) {
    set_metric(kRelativePerformance, false, "no learning blocks");
    set_metric(kSampleEfficiency, false, "no learning blocks");
    set_metric(kCumulativeGain, false, "no learning blocks");
  } else {
    set_metric(kRelativePerformance, true, "requires STE curves");
    set_metric(kSampleEfficiency, true,
               "requires STE curves and saturated performance");
    set_metric(kCumulativeGain, true, "");
  }
  set_metric(kLearnBurn, learn_blocks >= 2,
             learn_blocks >= 2 ? "" : "fewer than 2 learning blocks");

  bool pr_ok = false;
  for (const auto& [task, lbs] : lbs_by_task) {
    if (lbs.size() >= 3) {
      pr_ok = true;
      break;
    }
  }
  set_metric(kPerformanceRecovery, pr_ok,
             pr_ok ? "" : "no task has at least 3 learning blocks");

  return report;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::string_view id : kAllMetrics) {
    const auto it = metrics.find(std::string(id));
    if (it == metrics.end()) continue;
    out << id << ": "
        << (it->second.computable ? "computable" : "not computable");
    if (!it->second.reason.empty()) out << " (" << it->second.reason << ")";
    out << '\n';
  }
  for (const Finding& finding : findings) {
    out << "[" << finding.code << "] " << finding.message << '\n';
  }
  return out.str();
}

}  // namespace lifemetrics
