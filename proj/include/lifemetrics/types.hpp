#ifndef LIFEMETRICS_TYPES_HPP
#define LIFEMETRICS_TYPES_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lifemetrics {

enum class BlockType { learn, eval };

std::string_view to_string(BlockType type);
BlockType block_type_from_string(std::string_view s);  // throws std::invalid_argument

// Identifies one task variant. Records compare as the same variant iff both
// fields are equal; the variant label is the canonical rendering of the
// record's task_params (see canonical_variant).
struct TaskKey {
  std::string name;
  std::string variant;  // empty when the task has no parametric variation

  auto operator<=>(const TaskKey&) const = default;
  std::string str() const;  // "name" or "name[variant]"
};

// Canonical variant label: task_params keys in lexicographic order, rendered
// as "key=value" and joined with ";". String values are inserted verbatim,
// other value types use their compact JSON encoding. The label is stable
// across runs so per-variant normalization bounds line up between files.
std::string canonical_variant(const nlohmann::json& task_params);

struct ExperienceRecord {
  std::int64_t exp_num = 0;
  std::int32_t block_num = 0;
  BlockType block_type = BlockType::learn;
  TaskKey task;
  nlohmann::json task_params = nlohmann::json::object();
  std::map<std::string, double> metrics;
  std::string lifetime_id;
  std::string timestamp;

  bool operator==(const ExperienceRecord&) const = default;
};

// Maximal run of consecutive records with one TaskKey inside a block.
// Indices are block-local and inclusive.
struct Regime {
  TaskKey task;
  std::size_t first = 0;
  std::size_t last = 0;

  bool operator==(const Regime&) const = default;
};

struct BlockInfo {
  std::int32_t block_num = 0;
  BlockType block_type = BlockType::learn;
  std::size_t first_record = 0;  // index into LifetimeLog::records
  std::size_t length = 0;
  std::vector<TaskKey> tasks;  // distinct, in order of first appearance
  std::vector<Regime> regimes;

  bool operator==(const BlockInfo&) const = default;
  bool contains(const TaskKey& task) const;
};

// Immutable after construction; parsing validates ordering invariants
// (exp_num strictly increasing, block_num non-decreasing, one block_type
// per block) and segments records into blocks and regimes.
struct LifetimeLog {
  std::string lifetime_id;
  std::string perf_key;
  std::vector<ExperienceRecord> records;
  std::vector<BlockInfo> blocks;

  bool operator==(const LifetimeLog&) const = default;

  double perf(std::size_t record_index) const {
    return records[record_index].metrics.at(perf_key);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lifemetrics

#endif  // LIFEMETRICS_TYPES_HPP
