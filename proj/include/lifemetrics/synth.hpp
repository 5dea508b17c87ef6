#ifndef LIFEMETRICS_SYNTH_HPP
#define LIFEMETRICS_SYNTH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifemetrics/preprocess.hpp"
#include "lifemetrics/ste_store.hpp"
#include "lifemetrics/types.hpp"

namespace lifemetrics {

// Idealized exponential-approach learner for one task. While the task is
// being learned, the i-th LX of a block entered at mastery m0 records
// v_i = asymptote - (asymptote - m0) * exp(-learn_rate * (i - 1)) and the
// block exit mastery is the same expression at i = n + 1. While other tasks
// are learned, mastery decays toward start by a factor (1 - forgetting) per
// intervening LX.
struct TaskProfile {
  double asymptote = 1.0;
  double learn_rate = 0.1;
  double start = 0.0;
  double forgetting = 0.0;
};

struct LearnerProfile {
  std::map<TaskKey, TaskProfile> tasks;
  // (source, target) -> fraction of the source's per-block mastery gain
  // added to the target's mastery when the block ends; in [-1, 1].
  std::map<std::pair<TaskKey, TaskKey>, double> transfer;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

struct SegmentSpec {
  TaskKey task;
  std::size_t count = 1;
};

struct BlockSpec {
  BlockType type = BlockType::learn;
  std::vector<SegmentSpec> segments;
};

struct ScenarioSpec {
  std::string lifetime_id = "synthetic";
  std::string perf_key = "reward";
  std::vector<BlockSpec> blocks;
  std::vector<std::pair<TaskKey, std::size_t>> ste;  // task -> LX budget
};

// Deterministic for a given (spec, profile): noise comes from mt19937_64
// seeded with profile.seed, one Box-Muller normal draw per recorded value.
LifetimeLog generate_lifetime(const ScenarioSpec& spec,
                              const LearnerProfile& profile);

// Same growth law from the task's start value, no transfer or forgetting.
SteCurve generate_ste(const TaskKey& task, const LearnerProfile& profile,
                      std::size_t n_lx);

// All of the scenario's STE curves, keyed like load_ste's result.
SteStore generate_ste_store(const ScenarioSpec& spec,
                            const LearnerProfile& profile);

// Expected metric values for a noise-free fixture: regenerates the growth-law
// curves, applies the normalization pipeline definition with its own
// independent arithmetic, and walks each metric's definition literally.
// Absent optional = the metric is expected to be undefined. Throws
// std::invalid_argument when profile.noise_std != 0.
std::map<std::string, std::optional<double>> expected_values(
    const ScenarioSpec& spec, const LearnerProfile& profile,
    const PreprocessConfig& config);

// --- declarative files (key = value syntax, see docs/fixtures) ---

// "Name" or "Name#label"; the label becomes task_params {"variant": label}.
TaskKey task_key_from_token(const std::string& token);
nlohmann::json task_params_for(const TaskKey& task);

LearnerProfile profile_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries);
ScenarioSpec scenario_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_SYNTH_HPP
