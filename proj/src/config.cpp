#include "lifemetrics/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lifemetrics {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': not a number: " + value);
  }
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size() || parsed < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(parsed);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': not a non-negative integer: " + value);
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_kv_text(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // '#' opens a comment at line start or after whitespace; elsewhere it is
    // data (task tokens use it for variant labels).
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '#' && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
        raw.erase(i);
        break;
      }
    }
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line) +
                                  ": expected 'key = value'");
    }
    std::string key = trim(raw.substr(0, eq));
    std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line) +
                                  ": empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> read_kv_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return read_kv_text(text.str());
}

ToolConfig tool_config_from_kv(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  ToolConfig config;
  for (const auto& [key, value] : entries) {
    if (key == "window_fraction") {
      config.preprocess.window_fraction = parse_double(key, value);
    } else if (key == "window_cap") {
      config.preprocess.window_cap = parse_count(key, value);
    } else if (key == "clamp_low_pct") {
      config.preprocess.clamp_low_pct = parse_double(key, value);
    } else if (key == "clamp_high_pct") {
      config.preprocess.clamp_high_pct = parse_double(key, value);
    } else if (key == "scale_min") {
      config.preprocess.scale_min = parse_double(key, value);
    } else if (key == "scale_max") {
      config.preprocess.scale_max = parse_double(key, value);
    } else if (key == "perf_key") {
      config.perf_key = value;
    } else if (key == "format") {
      config.format = value;
    } else if (key == "ste_dir") {
      config.ste_dir = value;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  config.preprocess.check();
  return config;
}

ToolConfig load_tool_config(const std::filesystem::path& path) {
  return tool_config_from_kv(read_kv_file(path));
}

}  // namespace lifemetrics
