#include "lifemetrics/supplemental.hpp"

#include <algorithm>
#include <stdexcept>

#include "lifemetrics/validate.hpp"

namespace lifemetrics {

std::size_t recovery_time(const std::vector<double>& block_values,
                          double prior_tlp) {
  for (std::size_t i = 0; i < block_values.size(); ++i) {
    if (block_values[i] >= prior_tlp) return i == 0 ? 0 : i + 1;
  }
  return block_values.size() + 1;
}

double theil_sen_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> slopes;
  slopes.reserve(points.size() * (points.size() + 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dx = points[j].first - points[i].first;
      if (dx == 0.0) continue;
      slopes.push_back((points[j].second - points[i].second) / dx);
    }
  }
  if (slopes.empty()) {
    throw std::invalid_argument("theil_sen_slope: fewer than 2 distinct x");
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  if (n % 2 == 1) return slopes[n / 2];
  return (slopes[n / 2 - 1] + slopes[n / 2]) / 2.0;
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("ols_slope: size mismatch");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("ols_slope: fewer than 2 points");
  }
  const double x_mean = mean(xs);
  const double y_mean = mean(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("ols_slope: fewer than 2 distinct x");
  }
  return sxy / sxx;
}

MetricResult performance_recovery(const PreprocessedLog& pre,
                                  const std::vector<BlockSummary>& summaries) {
  const auto lbs_by_task = learn_blocks_by_task(pre.log);
  MetricResult result;
  result.name = std::string(kPerformanceRecovery);
  for (const auto& [task, lbs] : lbs_by_task) {
    if (lbs.size() < 3) {
      if (lbs.size() == 2) {
        result.notes.push_back(task.str() +
                               " has 2 learning blocks; at least 3 are "
                               "needed for a recovery trend");
      }
      continue;
    }
    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 1; k < lbs.size(); ++k) {
      const double prior_tlp =
          summaries[lbs[k - 1]].per_task.at(task).value;
      std::vector<double> values;
      const BlockInfo& block = pre.log.blocks[lbs[k]];
      for (std::size_t i = block.first_record;
           i < block.first_record + block.length; ++i) {
        if (pre.log.records[i].task == task) values.push_back(pre.processed[i]);
      }
      const std::size_t rt = recovery_time(values, prior_tlp);
      points.emplace_back(static_cast<double>(k + 1), static_cast<double>(rt));
      result.details.emplace_back(
          "recovery:" + task.str() + "#" + std::to_string(k + 1),
          static_cast<double>(rt));
    }
    result.sub_values.emplace_back(task.str(), -theil_sen_slope(points));
  }
  if (result.sub_values.empty()) {
    auto undefined = MetricResult::undefined(
        kPerformanceRecovery, "no task has at least 3 learning blocks");
    undefined.notes = result.notes;
    return undefined;
  }
  result.notes.push_back(
      "recovery trends over few blocks are highly variable; read alongside "
      "the scenario context");
  result.finish_from_sub_values();
  return result;
}

MetricResult cumulative_gain(const PreprocessedLog& pre) {
  MetricResult result;
  result.name = std::string(kCumulativeGain);
  for (std::size_t bi = 0; bi < pre.log.blocks.size(); ++bi) {
    const BlockInfo& block = pre.log.blocks[bi];
    if (block.block_type != BlockType::learn) continue;
    double slope = 0.0;  // a single-LX block has a flat trend
    if (block.length >= 2) {
      std::vector<double> xs(block.length);
      std::vector<double> ys(block.length);
      for (std::size_t i = 0; i < block.length; ++i) {
        xs[i] = static_cast<double>(i);
        ys[i] = pre.processed[block.first_record + i];
      }
      slope = ols_slope(xs, ys);
    }
    double gain = 0.0;
    if (slope > kGainSlopeEpsilon) gain = 1.0;
    if (slope < -kGainSlopeEpsilon) gain = -1.0;
    result.sub_values.emplace_back("block" + std::to_string(block.block_num),
                                   gain);
  }
  if (result.sub_values.empty()) {
    return MetricResult::undefined(kCumulativeGain, "no learning blocks");
  }
  result.finish_from_sub_values();
  return result;
}

MetricResult learn_burn(const PreprocessedLog& pre) {
  std::vector<std::size_t> learn_blocks;
  for (std::size_t bi = 0; bi < pre.log.blocks.size(); ++bi) {
    if (pre.log.blocks[bi].block_type == BlockType::learn) {
      learn_blocks.push_back(bi);
    }
  }
  if (learn_blocks.size() < 2) {
    return MetricResult::undefined(kLearnBurn, "fewer than 2 learning blocks");
  }

  // Lifetime-wide trend: every learning value against its global LX index.
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t lx_index = 0;
  for (std::size_t i = 0; i < pre.log.records.size(); ++i) {
    if (pre.log.records[i].block_type != BlockType::learn) continue;
    xs.push_back(static_cast<double>(lx_index++));
    ys.push_back(pre.processed[i]);
  }
  const double avg_learn_rate = ols_slope(xs, ys);

  MetricResult result;
  result.name = std::string(kLearnBurn);
  result.notes.push_back(
      "first learning block excluded: no change precedes it");
  if (avg_learn_rate == 0.0) {
    auto undefined =
        MetricResult::undefined(kLearnBurn, "zero average learn rate");
    undefined.notes = result.notes;
    return undefined;
  }
  for (std::size_t k = 1; k < learn_blocks.size(); ++k) {
    const BlockInfo& block = pre.log.blocks[learn_blocks[k]];
    if (block.length < 2) {
      result.notes.push_back("learning block " +
                             std::to_string(block.block_num) +
                             " has a single LX; burn rate skipped");
      continue;
    }
    std::vector<double> bx(block.length);
    std::vector<double> by(block.length);
    for (std::size_t i = 0; i < block.length; ++i) {
      bx[i] = static_cast<double>(i);
      by[i] = pre.processed[block.first_record + i];
    }
    const double burn_rate = ols_slope(bx, by);
    result.sub_values.emplace_back("block" + std::to_string(block.block_num),
                                   burn_rate / avg_learn_rate);
    result.details.emplace_back(
        "burn-rate:block" + std::to_string(block.block_num), burn_rate);
  }
  if (result.sub_values.empty()) {
    auto undefined = MetricResult::undefined(
        kLearnBurn, "no learning block after a change has enough LXs");
    undefined.notes = result.notes;
    return undefined;
  }
  result.details.emplace_back("avg-learn-rate", avg_learn_rate);
  result.finish_from_sub_values();
  return result;
}

}  // namespace lifemetrics
