#ifndef LIFEMETRICS_CONFIG_HPP
#define LIFEMETRICS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifemetrics/preprocess.hpp"

namespace lifemetrics {

// "key = value" lines; '#' starts a comment; keys may repeat. Order is
// preserved so list-like entries (scenario blocks) keep their sequence.
std::vector<std::pair<std::string, std::string>> read_kv_text(
    const std::string& text);
std::vector<std::pair<std::string, std::string>> read_kv_file(
    const std::filesystem::path& path);

// Settings shared by the CLI and its config file; every command-line flag
// has a file equivalent, and flags win over file values, which win over
// these defaults.
struct ToolConfig {
  PreprocessConfig preprocess;
  std::string perf_key = "reward";
  std::string format = "json";
  std::string ste_dir;
  std::string log;
  std::string output;
  std::string spec;
  std::string profile;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
};

// Recognized keys: the PreprocessConfig fields plus perf_key, format,
// ste_dir, log, output, spec, profile, out_dir, seed and oracle. Unknown
// keys raise std::invalid_argument.
ToolConfig tool_config_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries);
ToolConfig load_tool_config(const std::filesystem::path& path);

}  // namespace lifemetrics

#endif  // LIFEMETRICS_CONFIG_HPP
