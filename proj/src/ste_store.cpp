#include "lifemetrics/ste_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "lifemetrics/config.hpp"
#include "lifemetrics/log_io.hpp"

namespace lifemetrics {

void SteStore::add(SteCurve curve) {
  curves[curve.task].push_back(std::move(curve));
}

SteCurve ste_from_log(const LifetimeLog& log, const std::string& source_id) {
  std::set<TaskKey> tasks;
  for (const ExperienceRecord& rec : log.records) tasks.insert(rec.task);
  if (tasks.size() != 1) {
    throw std::invalid_argument("STE log " + source_id +
                                " must be single-task; found " +
                                std::to_string(tasks.size()) + " tasks");
  }
  SteCurve curve;
  curve.task = *tasks.begin();
  curve.source_id = source_id;
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    if (log.records[i].block_type == BlockType::learn) {
      curve.values.push_back(log.perf(i));
    }
  }
  if (curve.values.empty()) {
    throw std::invalid_argument("STE log " + source_id +
                                " has no learning experiences");
  }
  return curve;
}

SteStore load_ste(const std::filesystem::path& directory,
                  const std::string& perf_key) {
  if (!std::filesystem::is_directory(directory)) {
    throw std::runtime_error("not a directory: " + directory.string());
  }

  // Optional task-name mapping between STE runs and the lifetime log.
  std::map<std::string, std::string> rename;
  const auto manifest_path = directory / "ste_manifest.conf";
  if (std::filesystem::exists(manifest_path)) {
    for (const auto& [key, value] : read_kv_file(manifest_path)) {
      rename[key] = value;
    }
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".jsonl" || ext == ".json" || ext == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  SteStore store;
  for (const auto& path : files) {
    LifetimeLog log = parse_log_file(path, perf_key);
    SteCurve curve = ste_from_log(log, path.filename().string());
    const auto it = rename.find(curve.task.name);
    if (it != rename.end()) curve.task.name = it->second;
    store.add(std::move(curve));
  }
  return store;
}

}  // namespace lifemetrics
