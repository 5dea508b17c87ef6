#include "lifemetrics/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lifemetrics {

std::string_view to_string(BlockType type) {
  return type == BlockType::learn ? "learn" : "eval";
}

BlockType block_type_from_string(std::string_view s) {
  if (s == "learn") return BlockType::learn;
  if (s == "eval") return BlockType::eval;
  throw std::invalid_argument("unknown block_type: " + std::string(s));
}

std::string TaskKey::str() const {
  if (variant.empty()) return name;
  return name + "[" + variant + "]";
}

std::string canonical_variant(const nlohmann::json& task_params) {
  if (!task_params.is_object()) {
    throw std::invalid_argument("task_params must be a JSON object");
  }
  std::string label;
  // nlohmann objects iterate in key order already.
  for (auto it = task_params.begin(); it != task_params.end(); ++it) {
    if (!label.empty()) label += ';';
    label += it.key();
    label += '=';
    if (it.value().is_string()) {
      label += it.value().get<std::string>();
    } else {
      label += it.value().dump();
    }
  }
  return label;
}

bool BlockInfo::contains(const TaskKey& task) const {
  return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
}

namespace {

// Validates cross-record ordering as records arrive, then segments the
// finished sequence into blocks and regimes.
class LogBuilder {
 public:
  explicit LogBuilder(std::string perf_key) { log_.perf_key = std::move(perf_key); }

  void append(ExperienceRecord rec, std::size_t line) {
    if (rec.metrics.empty()) {
      throw ParseError(line, "metrics object is empty");
    }
    if (rec.metrics.find(log_.perf_key) == rec.metrics.end()) {
      throw ParseError(line, "missing perf_key '" + log_.perf_key + "'");
    }
    for (const auto& [name, value] : rec.metrics) {
      if (!std::isfinite(value)) {
        throw ParseError(line, "non-finite value for metric '" + name + "'");
      }
    }
    if (!log_.records.empty()) {
      const ExperienceRecord& prev = log_.records.back();
      if (rec.exp_num <= prev.exp_num) {
        throw ParseError(line, "exp_num " + std::to_string(rec.exp_num) +
                                   " does not increase (previous " +
                                   std::to_string(prev.exp_num) + ")");
      }
      if (rec.block_num < prev.block_num) {
        throw ParseError(line, "block_num regression: " +
                                   std::to_string(rec.block_num) + " after " +
                                   std::to_string(prev.block_num));
      }
      if (rec.block_num == prev.block_num && rec.block_type != prev.block_type) {
        throw ParseError(line, "mixed block_type in block " +
                                   std::to_string(rec.block_num));
      }
    }
    if (!rec.lifetime_id.empty()) {
      if (log_.lifetime_id.empty()) {
        log_.lifetime_id = rec.lifetime_id;
      } else if (log_.lifetime_id != rec.lifetime_id) {
        throw ParseError(line, "mixed lifetime_id: '" + rec.lifetime_id +
                                   "' after '" + log_.lifetime_id + "'");
      }
    }
    log_.records.push_back(std::move(rec));
  }

  LifetimeLog finish() {
    if (log_.records.empty()) {
      throw ParseError(0, "log contains no records");
    }
    segment_blocks();
    return std::move(log_);
  }

 private:
  void segment_blocks() {
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= log_.records.size(); ++i) {
      if (i == log_.records.size() ||
          log_.records[i].block_num != log_.records[begin].block_num) {
        log_.blocks.push_back(make_block(begin, i));
        begin = i;
      }
    }
  }

  BlockInfo make_block(std::size_t begin, std::size_t end) const {
    BlockInfo block;
    block.block_num = log_.records[begin].block_num;
    block.block_type = log_.records[begin].block_type;
    block.first_record = begin;
    block.length = end - begin;
    for (std::size_t i = begin; i < end; ++i) {
      const TaskKey& task = log_.records[i].task;
      if (!block.contains(task)) block.tasks.push_back(task);
      if (block.regimes.empty() || block.regimes.back().task != task) {
        block.regimes.push_back({task, i - begin, i - begin});
      } else {
        block.regimes.back().last = i - begin;
      }
    }
    return block;
  }

  LifetimeLog log_;
};

ExperienceRecord record_from_json(const nlohmann::json& obj, std::size_t line) {
  if (!obj.is_object()) throw ParseError(line, "record is not a JSON object");
  for (const char* key : {"exp_num", "block_num", "block_type", "task_name",
                          "task_params", "metrics"}) {
    if (!obj.contains(key)) {
      throw ParseError(line, std::string("missing required key '") + key + "'");
    }
  }

  ExperienceRecord rec;
  if (!obj["exp_num"].is_number_integer() || obj["exp_num"].get<std::int64_t>() < 0) {
    throw ParseError(line, "exp_num must be a non-negative integer");
  }
  rec.exp_num = obj["exp_num"].get<std::int64_t>();

  if (!obj["block_num"].is_number_integer() || obj["block_num"].get<std::int64_t>() < 0) {
    throw ParseError(line, "block_num must be a non-negative integer");
  }
  rec.block_num = obj["block_num"].get<std::int32_t>();

  if (!obj["block_type"].is_string()) {
    throw ParseError(line, "block_type must be a string");
  }
  try {
    rec.block_type = block_type_from_string(obj["block_type"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }

  if (!obj["task_name"].is_string() || obj["task_name"].get<std::string>().empty()) {
    throw ParseError(line, "task_name must be a non-empty string");
  }
  rec.task.name = obj["task_name"].get<std::string>();

  if (!obj["task_params"].is_object()) {
    throw ParseError(line, "task_params must be a JSON object");
  }
  rec.task_params = obj["task_params"];
  rec.task.variant = canonical_variant(rec.task_params);

  if (!obj["metrics"].is_object()) {
    throw ParseError(line, "metrics must be a JSON object");
  }
  for (auto it = obj["metrics"].begin(); it != obj["metrics"].end(); ++it) {
    if (!it.value().is_number()) {
      throw ParseError(line, "metric '" + it.key() + "' is not a number");
    }
    rec.metrics[it.key()] = it.value().get<double>();
  }

  if (obj.contains("lifetime_id")) {
    if (!obj["lifetime_id"].is_string()) {
      throw ParseError(line, "lifetime_id must be a string");
    }
    rec.lifetime_id = obj["lifetime_id"].get<std::string>();
  }
  if (obj.contains("timestamp")) {
    if (!obj["timestamp"].is_string()) {
      throw ParseError(line, "timestamp must be a string");
    }
    rec.timestamp = obj["timestamp"].get<std::string>();
  }
  return rec;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// Splits one CSV row; supports quoted fields with "" escapes, no embedded
// newlines (the JSON cells this format carries never contain them).
std::vector<std::string> split_csv_row(const std::string& row, std::size_t line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    char c = row[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == row.size()) {
      // tolerate CRLF
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

nlohmann::json parse_json_cell(const std::string& cell, const char* column,
                               std::size_t line) {
  nlohmann::json value = nlohmann::json::parse(cell, nullptr, false);
  if (value.is_discarded()) {
    throw ParseError(line, std::string("column '") + column +
                               "' is not valid JSON: " + cell);
  }
  return value;
}

}  // namespace

LifetimeLog parse_log(std::istream& in, const std::string& perf_key) {
  LogBuilder builder(perf_key);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (blank(raw)) continue;
    nlohmann::json obj = nlohmann::json::parse(raw, nullptr, false);
    if (obj.is_discarded()) {
      throw ParseError(line, "malformed JSON");
    }
    builder.append(record_from_json(obj, line), line);
  }
  return builder.finish();
}

LifetimeLog parse_log_csv(std::istream& in, const std::string& perf_key) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw) && blank(raw)) ++line;
  ++line;
  if (blank(raw)) throw ParseError(0, "log contains no records");

  std::vector<std::string> header = split_csv_row(raw, line);
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
  for (const char* key : {"exp_num", "block_num", "block_type", "task_name",
                          "task_params", "metrics"}) {
    if (columns.find(key) == columns.end()) {
      throw ParseError(line, std::string("missing required column '") + key + "'");
    }
  }

  LogBuilder builder(perf_key);
  while (std::getline(in, raw)) {
    ++line;
    if (blank(raw)) continue;
    std::vector<std::string> fields = split_csv_row(raw, line);
    if (fields.size() < header.size()) {
      throw ParseError(line, "row has " + std::to_string(fields.size()) +
                                 " fields, header has " +
                                 std::to_string(header.size()));
    }
    auto cell = [&](const std::string& name) -> const std::string& {
      return fields[columns.at(name)];
    };
    nlohmann::json obj = nlohmann::json::object();
    obj["exp_num"] = parse_json_cell(cell("exp_num"), "exp_num", line);
    obj["block_num"] = parse_json_cell(cell("block_num"), "block_num", line);
    obj["block_type"] = cell("block_type");
    obj["task_name"] = cell("task_name");
    obj["task_params"] = parse_json_cell(cell("task_params"), "task_params", line);
    obj["metrics"] = parse_json_cell(cell("metrics"), "metrics", line);
    if (columns.count("lifetime_id") && !cell("lifetime_id").empty()) {
      obj["lifetime_id"] = cell("lifetime_id");
    }
    if (columns.count("timestamp") && !cell("timestamp").empty()) {
      obj["timestamp"] = cell("timestamp");
    }
    builder.append(record_from_json(obj, line), line);
  }
  return builder.finish();
}

LifetimeLog parse_log_file(const std::filesystem::path& path,
                           const std::string& perf_key) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open log file: " + path.string());
  }
  if (path.extension() == ".csv") return parse_log_csv(in, perf_key);
  return parse_log(in, perf_key);
}

void write_log(std::ostream& out, const LifetimeLog& log) {
  for (const ExperienceRecord& rec : log.records) {
    nlohmann::json obj = nlohmann::json::object();
    obj["exp_num"] = rec.exp_num;
    obj["block_num"] = rec.block_num;
    obj["block_type"] = std::string(to_string(rec.block_type));
    obj["task_name"] = rec.task.name;
    obj["task_params"] = rec.task_params;
    obj["metrics"] = rec.metrics;
    if (!rec.lifetime_id.empty()) obj["lifetime_id"] = rec.lifetime_id;
    if (!rec.timestamp.empty()) obj["timestamp"] = rec.timestamp;
    out << obj.dump() << '\n';
  }
}

void write_log_file(const std::filesystem::path& path, const LifetimeLog& log) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write log file: " + path.string());
  }
  write_log(out, log);
}

std::vector<std::pair<std::int32_t, std::vector<double>>> task_series(
    const LifetimeLog& log, const TaskKey& task, BlockType block_type,
    const std::string& perf_key) {
  bool seen = false;
  std::vector<std::pair<std::int32_t, std::vector<double>>> series;
  for (const BlockInfo& block : log.blocks) {
    if (block.contains(task)) seen = true;
    if (block.block_type != block_type || !block.contains(task)) continue;
    std::vector<double> values;
    for (std::size_t i = block.first_record;
         i < block.first_record + block.length; ++i) {
      if (log.records[i].task == task) {
        values.push_back(log.records[i].metrics.at(perf_key));
      }
    }
    series.emplace_back(block.block_num, std::move(values));
  }
  if (!seen) {
    throw std::invalid_argument("unknown task: " + task.str());
  }
  return series;
}

}  // namespace lifemetrics
