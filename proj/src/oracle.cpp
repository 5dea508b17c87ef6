// expected_values: reference results for noise-free synthetic fixtures.
//
// Everything here is deliberately self-contained: the normalization steps
// and each metric definition are re-implemented as plain literal walks over
// a flat block list, so the engine's preprocess/metric code paths are
// checked against an independent route. Only the growth-law fixture
// generation is shared with the engine (it *is* the fixture).

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lifemetrics/metrics.hpp"
#include "lifemetrics/synth.hpp"

namespace lifemetrics {

namespace {

// One block of the fixture, entries in record order.
struct OBlock {
  bool learn = false;
  std::vector<std::pair<TaskKey, double>> entries;

  bool covers(const TaskKey& task) const {
    for (const auto& [t, v] : entries) {
      if (t == task) return true;
    }
    return false;
  }

  std::vector<double> values_of(const TaskKey& task) const {
    std::vector<double> out;
    for (const auto& [t, v] : entries) {
      if (t == task) out.push_back(v);
    }
    return out;
  }
};

double omean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::size_t owindow(std::size_t n, const PreprocessConfig& c) {
  const auto w = static_cast<std::size_t>(
      std::floor(c.window_fraction * static_cast<double>(n)));
  return std::max<std::size_t>(1, std::min(w, c.window_cap));
}

std::vector<double> osmooth(const std::vector<double>& values,
                            const PreprocessConfig& c) {
  const std::size_t n = values.size();
  const std::size_t w = owindow(n, c);
  if (w == 1) return values;
  const std::size_t left = (w - 1) / 2;
  const std::size_t right = w - 1 - left;
  std::vector<double> padded;
  padded.insert(padded.end(), left, values.front());
  padded.insert(padded.end(), values.begin(), values.end());
  padded.insert(padded.end(), right, values.back());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < w; ++j) sum += padded[i + j];
    out[i] = sum / static_cast<double>(w);
  }
  return out;
}

double opercentile(std::vector<double> values, double pct) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values.front();
  const double rank = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
  const double lo = std::floor(rank);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= values.size()) return values.back();
  return values[i] + (rank - lo) * (values[i + 1] - values[i]);
}

double oscale(double v, double low, double high, const PreprocessConfig& c) {
  if (low >= high) return c.scale_min;
  const double clipped = std::min(std::max(v, low), high);
  const double ratio = (clipped - low) / (high - low);
  return c.scale_min + ratio * (c.scale_max - c.scale_min);
}

double otlp(const std::vector<double>& values) {
  const std::size_t n = values.size();
  auto tail =
      static_cast<std::size_t>(std::ceil(0.10 * static_cast<double>(n)));
  if (tail < 1) tail = 1;
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) sum += values[i];
  return sum / static_cast<double>(tail);
}

double ocontrast(double a, double b) { return (a - b) / (a + b); }

double otheil_sen(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dx = points[j].first - points[i].first;
      if (dx != 0.0) slopes.push_back((points[j].second - points[i].second) / dx);
    }
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  return n % 2 == 1 ? slopes[n / 2]
                    : (slopes[n / 2 - 1] + slopes[n / 2]) / 2.0;
}

double ools(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double xm = omean(xs);
  const double ym = omean(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xm) * (ys[i] - ym);
    sxx += (xs[i] - xm) * (xs[i] - xm);
  }
  return sxy / sxx;
}

std::vector<TaskKey> otasks(const std::vector<OBlock>& blocks) {
  std::vector<TaskKey> tasks;
  for (const OBlock& b : blocks) {
    for (const auto& [t, v] : b.entries) {
      if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) {
        tasks.push_back(t);
      }
    }
  }
  return tasks;
}

struct Fixture {
  std::vector<OBlock> blocks;                       // processed values
  std::map<TaskKey, std::vector<std::vector<double>>> ste;  // processed
};

// Applies the normalization pipeline (smooth learning curves, per-variant
// percentile bounds over lifetime + STE data, clamp and scale) to the
// fixture's raw values.
Fixture normalize(std::vector<OBlock> blocks,
                  std::map<TaskKey, std::vector<std::vector<double>>> ste,
                  const PreprocessConfig& c) {
  // Smooth each task's sub-series within each learning block in place.
  for (OBlock& b : blocks) {
    if (!b.learn) continue;
    for (const TaskKey& task : otasks({b})) {
      std::vector<std::size_t> where;
      std::vector<double> series;
      for (std::size_t i = 0; i < b.entries.size(); ++i) {
        if (b.entries[i].first == task) {
          where.push_back(i);
          series.push_back(b.entries[i].second);
        }
      }
      const std::vector<double> sm = osmooth(series, c);
      for (std::size_t k = 0; k < where.size(); ++k) {
        b.entries[where[k]].second = sm[k];
      }
    }
  }
  for (auto& [task, curves] : ste) {
    for (auto& curve : curves) curve = osmooth(curve, c);
  }

  // Per-variant bounds over every value of the variant: smoothed learning
  // data (lifetime and STE) plus raw evaluation values.
  std::map<TaskKey, std::pair<double, double>> bounds;
  for (const TaskKey& task : otasks(blocks)) {
    std::vector<double> pool;
    for (const OBlock& b : blocks) {
      for (const auto& [t, v] : b.entries) {
        if (t == task) pool.push_back(v);
      }
    }
    const auto it = ste.find(task);
    if (it != ste.end()) {
      for (const auto& curve : it->second) {
        pool.insert(pool.end(), curve.begin(), curve.end());
      }
    }
    bounds[task] = {opercentile(pool, c.clamp_low_pct),
                    opercentile(pool, c.clamp_high_pct)};
  }
  for (const auto& [task, curves] : ste) {
    if (!bounds.count(task)) {
      std::vector<double> pool;
      for (const auto& curve : curves) {
        pool.insert(pool.end(), curve.begin(), curve.end());
      }
      bounds[task] = {opercentile(pool, c.clamp_low_pct),
                      opercentile(pool, c.clamp_high_pct)};
    }
  }

  for (OBlock& b : blocks) {
    for (auto& [t, v] : b.entries) {
      v = oscale(v, bounds.at(t).first, bounds.at(t).second, c);
    }
  }
  for (auto& [task, curves] : ste) {
    for (auto& curve : curves) {
      for (double& v : curve) {
        v = oscale(v, bounds.at(task).first, bounds.at(task).second, c);
      }
    }
  }
  return {std::move(blocks), std::move(ste)};
}

std::optional<double> pm_expected(const Fixture& fx) {
  std::vector<double> mvs;
  for (const TaskKey& task : otasks(fx.blocks)) {
    for (std::size_t bi = 0; bi < fx.blocks.size(); ++bi) {
      const OBlock& b = fx.blocks[bi];
      if (b.learn || !b.covers(task)) continue;
      // Most recent learning block of this task before bi.
      std::size_t recent = fx.blocks.size();
      for (std::size_t j = 0; j < bi; ++j) {
        if (fx.blocks[j].learn && fx.blocks[j].covers(task)) recent = j;
      }
      if (recent == fx.blocks.size()) continue;  // not yet learned
      // Its reference evaluation: next covering eval before relearning.
      std::size_t ref = fx.blocks.size();
      for (std::size_t j = recent + 1; j < fx.blocks.size(); ++j) {
        if (!fx.blocks[j].covers(task)) continue;
        if (fx.blocks[j].learn) break;
        ref = j;
        break;
      }
      if (ref >= fx.blocks.size() || ref == bi) continue;
      mvs.push_back(omean(b.values_of(task)) -
                    omean(fx.blocks[ref].values_of(task)));
    }
  }
  if (mvs.empty()) return std::nullopt;
  return omean(mvs);
}

std::optional<double> ft_expected(const Fixture& fx) {
  const auto tasks = otasks(fx.blocks);
  std::vector<double> firsts;
  for (const TaskKey& target : tasks) {
    // The target stops being "new" at its first learning block.
    std::size_t first_learned = fx.blocks.size();
    for (std::size_t j = 0; j < fx.blocks.size(); ++j) {
      if (fx.blocks[j].learn && fx.blocks[j].covers(target)) {
        first_learned = j;
        break;
      }
    }
    for (const TaskKey& source : tasks) {
      if (source == target) continue;
      // Earliest learning block of the source bracketed by evaluations of
      // the still-unlearned target.
      for (std::size_t l = 0; l < std::min(first_learned, fx.blocks.size());
           ++l) {
        if (!fx.blocks[l].learn || !fx.blocks[l].covers(source)) continue;
        std::size_t e1 = fx.blocks.size();
        for (std::size_t j = 0; j < l; ++j) {
          if (!fx.blocks[j].learn && fx.blocks[j].covers(target)) e1 = j;
        }
        if (e1 == fx.blocks.size()) continue;
        std::size_t e2 = fx.blocks.size();
        for (std::size_t j = l + 1; j < fx.blocks.size(); ++j) {
          if (!fx.blocks[j].learn && fx.blocks[j].covers(target)) {
            e2 = j;
            break;
          }
        }
        if (e2 == fx.blocks.size() || e2 > first_learned) continue;
        firsts.push_back(ocontrast(omean(fx.blocks[e2].values_of(target)),
                                   omean(fx.blocks[e1].values_of(target))));
        break;
      }
    }
  }
  if (firsts.empty()) return std::nullopt;
  return omean(firsts);
}

std::optional<double> bt_expected(const Fixture& fx) {
  const auto tasks = otasks(fx.blocks);
  std::vector<double> firsts;
  for (const TaskKey& affected : tasks) {
    std::vector<std::size_t> evals;
    std::size_t first_learned = fx.blocks.size();
    for (std::size_t j = 0; j < fx.blocks.size(); ++j) {
      if (!fx.blocks[j].covers(affected)) continue;
      if (fx.blocks[j].learn) {
        if (first_learned == fx.blocks.size()) first_learned = j;
      } else {
        evals.push_back(j);
      }
    }
    for (const TaskKey& learned : tasks) {
      if (learned == affected) continue;
      for (std::size_t k = 0; k + 1 < evals.size(); ++k) {
        const std::size_t e1 = evals[k];
        const std::size_t e2 = evals[k + 1];
        if (first_learned >= e1) continue;
        bool relearned = false;
        bool learned_here = false;
        for (std::size_t j = e1 + 1; j < e2; ++j) {
          if (!fx.blocks[j].learn) continue;
          if (fx.blocks[j].covers(affected)) relearned = true;
          if (fx.blocks[j].covers(learned)) learned_here = true;
        }
        if (relearned || !learned_here) continue;
        firsts.push_back(ocontrast(omean(fx.blocks[e2].values_of(affected)),
                                   omean(fx.blocks[e1].values_of(affected))));
        break;
      }
    }
  }
  if (firsts.empty()) return std::nullopt;
  return omean(firsts);
}

std::vector<double> concat_learn(const Fixture& fx, const TaskKey& task) {
  std::vector<double> out;
  for (const OBlock& b : fx.blocks) {
    if (!b.learn) continue;
    for (const auto& [t, v] : b.entries) {
      if (t == task) out.push_back(v);
    }
  }
  return out;
}

std::optional<double> rp_expected(const Fixture& fx) {
  std::vector<double> per_task;
  for (const TaskKey& task : otasks(fx.blocks)) {
    const std::vector<double> l2 = concat_learn(fx, task);
    if (l2.empty()) continue;
    const auto it = fx.ste.find(task);
    if (it == fx.ste.end() || it->second.empty()) continue;
    std::vector<double> per_curve;
    for (const auto& curve : it->second) {
      const std::size_t m = std::min(l2.size(), curve.size());
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < m; ++i) num += l2[i];
      for (std::size_t i = 0; i < m; ++i) den += curve[i];
      per_curve.push_back(num / den);
    }
    per_task.push_back(omean(per_curve));
  }
  if (per_task.empty()) return std::nullopt;
  return omean(per_task);
}

struct OSat {
  double value = 0.0;
  std::size_t ets = 0;
};

OSat osaturation(const std::vector<double>& values, std::size_t window) {
  OSat best;
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

bool osaturated(const std::vector<double>& values, std::size_t window,
                const OSat& sat, const PreprocessConfig& c) {
  const std::size_t tail = std::min(window, values.size());
  double sum = 0.0;
  for (std::size_t i = values.size() - tail; i < values.size(); ++i) {
    sum += values[i];
  }
  return sat.value - sum / static_cast<double>(tail) <=
         0.05 * (c.scale_max - c.scale_min);
}

std::optional<double> se_expected(const Fixture& fx,
                                  const PreprocessConfig& c) {
  std::vector<double> per_task;
  for (const TaskKey& task : otasks(fx.blocks)) {
    const std::vector<double> l2 = concat_learn(fx, task);
    if (l2.empty()) continue;
    const auto it = fx.ste.find(task);
    if (it == fx.ste.end() || it->second.empty()) continue;
    const OSat l2_sat = osaturation(l2, owindow(l2.size(), c));
    if (!osaturated(l2, owindow(l2.size(), c), l2_sat, c)) continue;
    std::vector<double> per_curve;
    for (const auto& curve : it->second) {
      const OSat ste_sat = osaturation(curve, owindow(curve.size(), c));
      if (!osaturated(curve, owindow(curve.size(), c), ste_sat, c)) continue;
      per_curve.push_back((l2_sat.value / ste_sat.value) *
                          (static_cast<double>(ste_sat.ets) /
                           static_cast<double>(l2_sat.ets)));
    }
    if (per_curve.empty()) continue;
    per_task.push_back(omean(per_curve));
  }
  if (per_task.empty()) return std::nullopt;
  return omean(per_task);
}

std::optional<double> pr_expected(const Fixture& fx) {
  std::vector<double> per_task;
  for (const TaskKey& task : otasks(fx.blocks)) {
    std::vector<std::vector<double>> lbs;
    for (const OBlock& b : fx.blocks) {
      if (b.learn && b.covers(task)) lbs.push_back(b.values_of(task));
    }
    if (lbs.size() < 3) continue;
    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 1; k < lbs.size(); ++k) {
      const double prior = otlp(lbs[k - 1]);
      std::size_t rt = lbs[k].size() + 1;
      for (std::size_t i = 0; i < lbs[k].size(); ++i) {
        if (lbs[k][i] >= prior) {
          rt = i == 0 ? 0 : i + 1;
          break;
        }
      }
      points.emplace_back(static_cast<double>(k + 1), static_cast<double>(rt));
    }
    per_task.push_back(-otheil_sen(points));
  }
  if (per_task.empty()) return std::nullopt;
  return omean(per_task);
}

std::optional<double> cg_expected(const Fixture& fx) {
  std::vector<double> gains;
  for (const OBlock& b : fx.blocks) {
    if (!b.learn) continue;
    double slope = 0.0;
    if (b.entries.size() >= 2) {
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < b.entries.size(); ++i) {
        xs.push_back(static_cast<double>(i));
        ys.push_back(b.entries[i].second);
      }
      slope = ools(xs, ys);
    }
    gains.push_back(slope > 1e-3 ? 1.0 : slope < -1e-3 ? -1.0 : 0.0);
  }
  if (gains.empty()) return std::nullopt;
  return omean(gains);
}

std::optional<double> lb_expected(const Fixture& fx) {
  std::vector<const OBlock*> learn_blocks;
  for (const OBlock& b : fx.blocks) {
    if (b.learn) learn_blocks.push_back(&b);
  }
  if (learn_blocks.size() < 2) return std::nullopt;
  std::vector<double> xs, ys;
  std::size_t lx = 0;
  for (const OBlock* b : learn_blocks) {
    for (const auto& [t, v] : b->entries) {
      xs.push_back(static_cast<double>(lx++));
      ys.push_back(v);
    }
  }
  const double alr = ools(xs, ys);
  if (alr == 0.0) return std::nullopt;
  std::vector<double> ratios;
  for (std::size_t k = 1; k < learn_blocks.size(); ++k) {
    const OBlock* b = learn_blocks[k];
    if (b->entries.size() < 2) continue;
    std::vector<double> bx, by;
    for (std::size_t i = 0; i < b->entries.size(); ++i) {
      bx.push_back(static_cast<double>(i));
      by.push_back(b->entries[i].second);
    }
    ratios.push_back(ools(bx, by) / alr);
  }
  if (ratios.empty()) return std::nullopt;
  return omean(ratios);
}

}  // namespace

std::map<std::string, std::optional<double>> expected_values(
    const ScenarioSpec& spec, const LearnerProfile& profile,
    const PreprocessConfig& config) {
  if (profile.noise_std != 0.0) {
    throw std::invalid_argument("oracle requires zero noise");
  }
  config.check();

  // Fixture values from the growth law, regrouped into a flat block list.
  const LifetimeLog log = generate_lifetime(spec, profile);
  std::vector<OBlock> blocks;
  std::int32_t current = -1;
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const ExperienceRecord& rec = log.records[i];
    if (blocks.empty() || rec.block_num != current) {
      blocks.push_back({rec.block_type == BlockType::learn, {}});
      current = rec.block_num;
    }
    blocks.back().entries.emplace_back(rec.task, log.perf(i));
  }
  std::map<TaskKey, std::vector<std::vector<double>>> ste;
  const SteStore store = generate_ste_store(spec, profile);
  for (const auto& [task, curves] : store.curves) {
    for (const SteCurve& curve : curves) ste[task].push_back(curve.values);
  }

  const Fixture fx = normalize(std::move(blocks), std::move(ste), config);

  std::map<std::string, std::optional<double>> out;
  out[std::string(kPerformanceMaintenance)] = pm_expected(fx);
  out[std::string(kForwardTransfer)] = ft_expected(fx);
  out[std::string(kBackwardTransfer)] = bt_expected(fx);
  out[std::string(kRelativePerformance)] = rp_expected(fx);
  out[std::string(kSampleEfficiency)] = se_expected(fx, config);
  out[std::string(kPerformanceRecovery)] = pr_expected(fx);
  out[std::string(kCumulativeGain)] = cg_expected(fx);
  out[std::string(kLearnBurn)] = lb_expected(fx);
  return out;
}

}  // namespace lifemetrics
