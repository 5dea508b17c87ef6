#ifndef LIFEMETRICS_LOG_IO_HPP
#define LIFEMETRICS_LOG_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lifemetrics/types.hpp"

namespace lifemetrics {

// Parses a line-delimited JSON log. Required keys per line: exp_num,
// block_num, block_type ("learn"|"eval"), task_name, task_params (object),
// metrics (object of name -> finite number). Optional: lifetime_id,
// timestamp. Throws ParseError with the offending line number.
LifetimeLog parse_log(std::istream& in, const std::string& perf_key);

// Same record schema as the JSON log, with task_params and metrics carried
// as JSON-encoded cells. First row is the header.
LifetimeLog parse_log_csv(std::istream& in, const std::string& perf_key);

// Dispatches on extension: ".csv" -> CSV reader, anything else -> JSONL.
LifetimeLog parse_log_file(const std::filesystem::path& path,
                           const std::string& perf_key);

// Canonical JSONL serialization; parse_log(write_log(x)) == x.
void write_log(std::ostream& out, const LifetimeLog& log);
void write_log_file(const std::filesystem::path& path, const LifetimeLog& log);

// Per qualifying block (matching type, task present), the ordered perf_key
// values of that task's records; blocks in lifetime order. Throws
// std::invalid_argument if the task appears nowhere in the log.
std::vector<std::pair<std::int32_t, std::vector<double>>> task_series(
    const LifetimeLog& log, const TaskKey& task, BlockType block_type,
    const std::string& perf_key);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_LOG_IO_HPP
