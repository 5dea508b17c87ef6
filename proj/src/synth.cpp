#include "lifemetrics/synth.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lifemetrics {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One normal draw per value via Box-Muller over mt19937_64 uniforms; the
// cosine twin only, clipped to +/-8 sigma. Spelled out here (instead of
// std::normal_distribution) so streams are identical across standard
// library implementations.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : rng_(seed) {}

  double next(double sigma) {
    if (sigma == 0.0) return 0.0;
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    if (z > 8.0) z = 8.0;
    if (z < -8.0) z = -8.0;
    return sigma * z;
  }

 private:
  // Uniform in (0, 1]; keeps log() finite.
  double uniform_open() {
    const std::uint64_t bits = rng_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 1.0) / 9007199254740992.0;
  }

  std::mt19937_64 rng_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

const TaskProfile& profile_for(const LearnerProfile& profile,
                               const TaskKey& task) {
  const auto it = profile.tasks.find(task);
  if (it == profile.tasks.end()) {
    throw std::invalid_argument("no profile for task " + task.str());
  }
  return it->second;
}

double grown(const TaskProfile& tp, double m0, std::size_t lx) {
  return tp.asymptote -
         (tp.asymptote - m0) * std::exp(-tp.learn_rate * static_cast<double>(lx));
}

}  // namespace

TaskKey task_key_from_token(const std::string& token) {
  const auto hash = token.find('#');
  if (hash == std::string::npos) {
    if (token.empty()) throw std::invalid_argument("empty task token");
    return {token, ""};
  }
  const std::string name = token.substr(0, hash);
  const std::string label = token.substr(hash + 1);
  if (name.empty() || label.empty()) {
    throw std::invalid_argument("bad task token: " + token);
  }
  nlohmann::json params = {{"variant", label}};
  return {name, canonical_variant(params)};
}

nlohmann::json task_params_for(const TaskKey& task) {
  if (task.variant.empty()) return nlohmann::json::object();
  constexpr std::string_view prefix = "variant=";
  if (task.variant.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("task " + task.str() +
                                " was not built from a harness token");
  }
  return {{"variant", task.variant.substr(prefix.size())}};
}

LifetimeLog generate_lifetime(const ScenarioSpec& spec,
                              const LearnerProfile& profile) {
  if (spec.blocks.empty()) {
    throw std::invalid_argument("scenario has no blocks");
  }

  std::map<TaskKey, double> mastery;
  for (const auto& [task, tp] : profile.tasks) mastery[task] = tp.start;

  NoiseStream noise(profile.seed);
  LifetimeLog log;
  log.lifetime_id = spec.lifetime_id;
  log.perf_key = spec.perf_key;

  std::int64_t exp_num = 0;
  std::vector<ExperienceRecord> records;

  for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
    const BlockSpec& block = spec.blocks[bi];
    const std::map<TaskKey, double> at_entry = mastery;
    for (const SegmentSpec& seg : block.segments) {
      if (seg.count < 1) throw std::invalid_argument("segment count must be >= 1");
      const TaskProfile& tp = profile_for(profile, seg.task);
      if (block.type == BlockType::learn) {
        const double m0 = mastery.at(seg.task);
        for (std::size_t i = 1; i <= seg.count; ++i) {
          const double value = grown(tp, m0, i - 1);
          ExperienceRecord rec;
          rec.exp_num = exp_num++;
          rec.block_num = static_cast<std::int32_t>(bi);
          rec.block_type = BlockType::learn;
          rec.task = seg.task;
          rec.task_params = task_params_for(seg.task);
          rec.lifetime_id = spec.lifetime_id;
          rec.metrics[spec.perf_key] = value + noise.next(profile.noise_std);
          records.push_back(std::move(rec));
          // Every LX of this task erodes the others.
          for (auto& [other, m] : mastery) {
            if (other == seg.task) continue;
            const TaskProfile& op = profile_for(profile, other);
            if (op.forgetting > 0.0) {
              m = op.start + (m - op.start) * (1.0 - op.forgetting);
            }
          }
        }
        mastery.at(seg.task) = grown(tp, m0, seg.count);
      } else {
        for (std::size_t i = 0; i < seg.count; ++i) {
          ExperienceRecord rec;
          rec.exp_num = exp_num++;
          rec.block_num = static_cast<std::int32_t>(bi);
          rec.block_type = BlockType::eval;
          rec.task = seg.task;
          rec.task_params = task_params_for(seg.task);
          rec.lifetime_id = spec.lifetime_id;
          rec.metrics[spec.perf_key] =
              mastery.at(seg.task) + noise.next(profile.noise_std);
          records.push_back(std::move(rec));
        }
      }
    }
    if (block.type == BlockType::learn) {
      // Transfer applies once per completed block, from each task's gain.
      for (const auto& [source, entry_mastery] : at_entry) {
        const double gain = mastery.at(source) - entry_mastery;
        if (gain == 0.0) continue;
        for (auto& [target, m] : mastery) {
          if (target == source) continue;
          const auto it = profile.transfer.find({source, target});
          if (it != profile.transfer.end() && it->second != 0.0) {
            m += it->second * gain;
          }
        }
      }
    }
  }

  log.records = std::move(records);
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= log.records.size(); ++i) {
    if (i == log.records.size() ||
        log.records[i].block_num != log.records[begin].block_num) {
      BlockInfo info;
      info.block_num = log.records[begin].block_num;
      info.block_type = log.records[begin].block_type;
      info.first_record = begin;
      info.length = i - begin;
      for (std::size_t j = begin; j < i; ++j) {
        const TaskKey& task = log.records[j].task;
        if (!info.contains(task)) info.tasks.push_back(task);
        if (info.regimes.empty() || info.regimes.back().task != task) {
          info.regimes.push_back({task, j - begin, j - begin});
        } else {
          info.regimes.back().last = j - begin;
        }
      }
      log.blocks.push_back(std::move(info));
      begin = i;
    }
  }
  return log;
}

SteCurve generate_ste(const TaskKey& task, const LearnerProfile& profile,
                      std::size_t n_lx) {
  if (n_lx < 1) throw std::invalid_argument("STE needs at least 1 LX");
  const TaskProfile& tp = profile_for(profile, task);
  NoiseStream noise(profile.seed ^ fnv1a(task.str()));
  SteCurve curve;
  curve.task = task;
  curve.source_id = "ste:" + task.str();
  curve.values.reserve(n_lx);
  for (std::size_t i = 0; i < n_lx; ++i) {
    curve.values.push_back(grown(tp, tp.start, i) +
                           noise.next(profile.noise_std));
  }
  return curve;
}

SteStore generate_ste_store(const ScenarioSpec& spec,
                            const LearnerProfile& profile) {
  SteStore store;
  std::map<TaskKey, std::size_t> counter;
  for (const auto& [task, n_lx] : spec.ste) {
    SteCurve curve = generate_ste(task, profile, n_lx);
    curve.source_id += "#" + std::to_string(++counter[task]);
    store.add(std::move(curve));
  }
  return store;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double to_double(const std::string& context, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": not a number: " + s);
  }
}

std::size_t to_count(const std::string& context, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 1) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": not a positive integer: " + s);
  }
}

}  // namespace

LearnerProfile profile_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  LearnerProfile profile;
  for (const auto& [key, value] : entries) {
    if (key == "seed") {
      profile.seed = static_cast<std::uint64_t>(
          std::stoull(value));
    } else if (key == "noise_std") {
      profile.noise_std = to_double("noise_std", value);
      if (profile.noise_std < 0.0) {
        throw std::invalid_argument("noise_std must be >= 0");
      }
    } else if (key == "task") {
      // task = <token> asymptote=<a> learn_rate=<r> start=<s> [forgetting=<f>]
      const auto tokens = split_ws(value);
      if (tokens.size() < 2) {
        throw std::invalid_argument("task entry needs a token and fields: " +
                                    value);
      }
      const TaskKey task = task_key_from_token(tokens[0]);
      TaskProfile tp;
      bool has_asymptote = false, has_rate = false, has_start = false;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos) {
          throw std::invalid_argument("task field must be name=value: " +
                                      tokens[i]);
        }
        const std::string field = tokens[i].substr(0, eq);
        const double v = to_double("task." + field, tokens[i].substr(eq + 1));
        if (field == "asymptote") {
          tp.asymptote = v;
          has_asymptote = true;
        } else if (field == "learn_rate") {
          if (v <= 0.0) throw std::invalid_argument("learn_rate must be > 0");
          tp.learn_rate = v;
          has_rate = true;
        } else if (field == "start") {
          tp.start = v;
          has_start = true;
        } else if (field == "forgetting") {
          if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("forgetting must be in [0, 1]");
          }
          tp.forgetting = v;
        } else {
          throw std::invalid_argument("unknown task field: " + field);
        }
      }
      if (!has_asymptote || !has_rate || !has_start) {
        throw std::invalid_argument(
            "task entry needs asymptote, learn_rate and start: " + value);
      }
      profile.tasks[task] = tp;
    } else if (key == "transfer") {
      // transfer = <source> <target> <coefficient>
      const auto tokens = split_ws(value);
      if (tokens.size() != 3) {
        throw std::invalid_argument(
            "transfer entry must be '<source> <target> <coef>': " + value);
      }
      const double coef = to_double("transfer", tokens[2]);
      if (coef < -1.0 || coef > 1.0) {
        throw std::invalid_argument("transfer coefficient must be in [-1, 1]");
      }
      profile.transfer[{task_key_from_token(tokens[0]),
                        task_key_from_token(tokens[1])}] = coef;
    } else {
      throw std::invalid_argument("unknown profile key: " + key);
    }
  }
  if (profile.tasks.empty()) {
    throw std::invalid_argument("profile defines no tasks");
  }
  for (const auto& [pair, coef] : profile.transfer) {
    if (!profile.tasks.count(pair.first) || !profile.tasks.count(pair.second)) {
      throw std::invalid_argument("transfer references an unknown task");
    }
  }
  return profile;
}

ScenarioSpec scenario_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  ScenarioSpec spec;
  for (const auto& [key, value] : entries) {
    if (key == "lifetime_id") {
      spec.lifetime_id = value;
    } else if (key == "perf_key") {
      spec.perf_key = value;
    } else if (key == "block") {
      // block = learn|eval <task>:<count> [<task>:<count> ...]
      const auto tokens = split_ws(value);
      if (tokens.size() < 2) {
        throw std::invalid_argument("block entry needs a type and segments: " +
                                    value);
      }
      BlockSpec block;
      block.type = block_type_from_string(tokens[0]);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto colon = tokens[i].rfind(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("segment must be task:count: " +
                                      tokens[i]);
        }
        SegmentSpec seg;
        seg.task = task_key_from_token(tokens[i].substr(0, colon));
        seg.count = to_count("segment count", tokens[i].substr(colon + 1));
        block.segments.push_back(std::move(seg));
      }
      spec.blocks.push_back(std::move(block));
    } else if (key == "ste") {
      // ste = <task> <lx budget>
      const auto tokens = split_ws(value);
      if (tokens.size() != 2) {
        throw std::invalid_argument("ste entry must be '<task> <count>': " +
                                    value);
      }
      spec.ste.emplace_back(task_key_from_token(tokens[0]),
                            to_count("ste count", tokens[1]));
    } else {
      throw std::invalid_argument("unknown scenario key: " + key);
    }
  }
  if (spec.blocks.empty()) {
    throw std::invalid_argument("scenario defines no blocks");
  }
  return spec;
}

}  // namespace lifemetrics
