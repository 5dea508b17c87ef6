#ifndef LIFEMETRICS_STE_STORE_HPP
#define LIFEMETRICS_STE_STORE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lifemetrics/types.hpp"

namespace lifemetrics {

// Learning curve of a single-task expert: the concatenated learning-block
// values of an agent only ever exposed to one task.
struct SteCurve {
  TaskKey task;
  std::vector<double> values;  // one per LX, lifetime order
  std::string source_id;

  bool operator==(const SteCurve&) const = default;
};

struct SteStore {
  std::map<TaskKey, std::vector<SteCurve>> curves;

  bool empty() const { return curves.empty(); }
  const std::vector<SteCurve>* find(const TaskKey& task) const {
    auto it = curves.find(task);
    return it == curves.end() ? nullptr : &it->second;
  }
  void add(SteCurve curve);
};

// Loads every *.jsonl / *.json / *.csv file in the directory as one STE
// curve (canonical log format, single task, learning values only). A file
// named ste_manifest.conf may rename STE task names to the lifetime log's
// names, one "ste_name = log_name" line per mapping.
SteStore load_ste(const std::filesystem::path& directory,
                  const std::string& perf_key);

// Builds one curve from an already-parsed log; throws std::invalid_argument
// if the log spans more than one TaskKey or has no learning experiences.
SteCurve ste_from_log(const LifetimeLog& log, const std::string& source_id);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_STE_STORE_HPP
