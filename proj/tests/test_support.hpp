#ifndef LIFEMETRICS_TEST_SUPPORT_HPP
#define LIFEMETRICS_TEST_SUPPORT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "lifemetrics/log_io.hpp"
#include "lifemetrics/preprocess.hpp"
#include "lifemetrics/types.hpp"

namespace test_support {

struct Seg {
  std::string task;  // "Name" or "Name#variant-label"
  std::vector<double> values;
};

struct Block {
  lifemetrics::BlockType type;
  std::vector<Seg> segments;
};

inline lifemetrics::TaskKey key(const std::string& token) {
  const auto hash = token.find('#');
  if (hash == std::string::npos) return {token, ""};
  nlohmann::json params = {{"variant", token.substr(hash + 1)}};
  return {token.substr(0, hash), lifemetrics::canonical_variant(params)};
}

// Builds a log by serializing the described records and running them
// through the parser, so every fixture also exercises the real ingest path.
inline lifemetrics::LifetimeLog make_log(const std::vector<Block>& blocks,
                                         const std::string& perf_key = "reward",
                                         const std::string& lifetime_id = "t") {
  std::ostringstream out;
  std::int64_t exp = 0;
  std::int32_t block_num = 0;
  for (const Block& block : blocks) {
    for (const Seg& seg : block.segments) {
      const auto hash = seg.task.find('#');
      const std::string name =
          hash == std::string::npos ? seg.task : seg.task.substr(0, hash);
      nlohmann::json params = nlohmann::json::object();
      if (hash != std::string::npos) {
        params["variant"] = seg.task.substr(hash + 1);
      }
      for (double v : seg.values) {
        nlohmann::json rec;
        rec["exp_num"] = exp++;
        rec["block_num"] = block_num;
        rec["block_type"] =
            block.type == lifemetrics::BlockType::learn ? "learn" : "eval";
        rec["task_name"] = name;
        rec["task_params"] = params;
        rec["metrics"] = {{perf_key, v}};
        rec["lifetime_id"] = lifetime_id;
        out << rec.dump() << '\n';
      }
    }
    ++block_num;
  }
  std::istringstream in(out.str());
  return lifemetrics::parse_log(in, perf_key);
}

// Identity normalization: values pass through the pipeline unchanged except
// for block smoothing being disabled by tiny windows. Used when a test wants
// to drive the metric layer with literal numbers.
inline lifemetrics::PreprocessedLog passthrough(
    const lifemetrics::LifetimeLog& log) {
  lifemetrics::PreprocessedLog pre;
  pre.log = log;
  pre.raw.resize(log.records.size());
  pre.processed.resize(log.records.size());
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    pre.raw[i] = log.perf(i);
    pre.processed[i] = pre.raw[i];
  }
  return pre;
}

}  // namespace test_support

#endif  // LIFEMETRICS_TEST_SUPPORT_HPP
