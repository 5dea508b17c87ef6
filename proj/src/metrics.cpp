#include "lifemetrics/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace lifemetrics {

void MetricResult::finish_from_sub_values() {
  if (sub_values.empty()) return;
  double sum = 0.0;
  for (const auto& [label, v] : sub_values) sum += v;
  value = sum / static_cast<double>(sub_values.size());
}

double contrast(double a, double b) {
  const double denom = a + b;
  if (denom == 0.0) {
    throw std::domain_error("contrast undefined: a + b == 0");
  }
  return (a - b) / denom;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of empty range");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double terminal_learning_performance(const std::vector<double>& block_values) {
  if (block_values.empty()) {
    throw std::invalid_argument("terminal_learning_performance: empty block");
  }
  const auto n = block_values.size();
  auto tail = static_cast<std::size_t>(
      std::ceil(0.10 * static_cast<double>(n)));
  if (tail < 1) tail = 1;
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) sum += block_values[i];
  return sum / static_cast<double>(tail);
}

double evaluation_performance(const std::vector<double>& block_values) {
  return mean(block_values);
}

}  // namespace lifemetrics
