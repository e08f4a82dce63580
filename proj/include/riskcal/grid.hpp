#pragma once

#include <cstddef>
#include <vector>

namespace riskcal {

// Finite ordered set of thresholds in [0, 1]. The maximum must be exactly
// 1.0: the top endpoint is the always-feasible fallback, and the grid
// ceiling below needs a value >= any x in [0, 1].
class ParameterGrid {
 public:
  explicit ParameterGrid(std::vector<double> values);

  // count evenly spaced values; the last one is forced to `stop` exactly.
  static ParameterGrid linspace(double start, double stop, std::size_t count);
  // start, start+step, ..., stop (count derived by rounding).
  static ParameterGrid step_range(double start, double stop, double step);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }

  // Index of the smallest grid value >= x; requires 0 <= x <= 1.
  std::size_t ceil_index(double x) const;

  bool operator==(const ParameterGrid& other) const { return values_ == other.values_; }

 private:
  std::vector<double> values_;
};

// Smallest grid value >= x.
double ceil_to_grid(double x, const ParameterGrid& grid);

}  // namespace riskcal
