#include "riskcal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcal {

ParameterGrid::ParameterGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("ParameterGrid: empty value list");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw std::invalid_argument("ParameterGrid: values must lie in [0, 1]");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw std::invalid_argument("ParameterGrid: values must be strictly increasing");
    }
  }
  if (values_.back() != 1.0) {
    throw std::invalid_argument("ParameterGrid: maximum value must be exactly 1.0");
  }
}

ParameterGrid ParameterGrid::linspace(double start, double stop, std::size_t count) {
  if (count < 1) {
    throw std::invalid_argument("ParameterGrid::linspace: count must be >= 1");
  }
  std::vector<double> values(count);
  if (count == 1) {
    values[0] = stop;
  } else {
    const double span = stop - start;
    for (std::size_t i = 0; i < count; ++i) {
      values[i] = start + span * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    values.back() = stop;  // exact endpoint
  }
  return ParameterGrid(std::move(values));
}

ParameterGrid ParameterGrid::step_range(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop > start)) {
    throw std::invalid_argument("ParameterGrid::step_range: need step > 0 and stop > start");
  }
  const auto count = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  return linspace(start, stop, count);
}

std::size_t ParameterGrid::ceil_index(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("ParameterGrid::ceil_index: x must lie in [0, 1]");
  }
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  // x <= 1.0 == back(), so lower_bound always finds a value.
  return static_cast<std::size_t>(it - values_.begin());
}

double ceil_to_grid(double x, const ParameterGrid& grid) {
  return grid[grid.ceil_index(x)];
}

}  // namespace riskcal
