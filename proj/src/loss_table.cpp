#include "riskcal/loss_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcal {

double compensated_sum(const double* data, std::size_t count, std::size_t stride) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = data[k * stride];
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

namespace {

void check_unit_range(const std::vector<double>& entries, const char* what) {
  for (double v : entries) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(what) + ": losses must lie in [0, 1]");
    }
  }
}

}  // namespace

LossTable1::LossTable1(std::vector<double> entries, ParameterGrid grid, bool monotone)
    : entries_(std::move(entries)), grid_(std::move(grid)), monotone_(monotone) {
  const std::size_t m = grid_.size();
  if (entries_.empty() || entries_.size() % m != 0) {
    throw std::invalid_argument("LossTable1: entry count must be a nonzero multiple of grid size");
  }
  n_ = entries_.size() / m;
  check_unit_range(entries_, "LossTable1");
  if (monotone_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 1; j < m; ++j) {
        if (at(i, j) > at(i, j - 1)) {
          throw std::invalid_argument("LossTable1: monotone flag set but a row increases");
        }
      }
    }
  }
}

LossTable2::LossTable2(std::vector<double> entries, ParameterGrid grid_lambda,
                       ParameterGrid grid_gamma, bool monotone)
    : entries_(std::move(entries)),
      grid_lambda_(std::move(grid_lambda)),
      grid_gamma_(std::move(grid_gamma)),
      monotone_(monotone) {
  const std::size_t cell = grid_lambda_.size() * grid_gamma_.size();
  if (entries_.empty() || entries_.size() % cell != 0) {
    throw std::invalid_argument(
        "LossTable2: entry count must be a nonzero multiple of the grid product");
  }
  n_ = entries_.size() / cell;
  check_unit_range(entries_, "LossTable2");
  if (monotone_) {
    const std::size_t ml = grid_lambda_.size();
    const std::size_t mg = grid_gamma_.size();
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t a = 0; a < ml; ++a) {
        for (std::size_t b = 0; b < mg; ++b) {
          if (a > 0 && at(i, a, b) > at(i, a - 1, b)) {
            throw std::invalid_argument(
                "LossTable2: monotone flag set but a slice increases along lambda");
          }
          if (b > 0 && at(i, a, b) > at(i, a, b - 1)) {
            throw std::invalid_argument(
                "LossTable2: monotone flag set but a slice increases along gamma");
          }
        }
      }
    }
  }
}

RiskLevels::RiskLevels(double a1, double a2) : alpha1(a1), alpha2(a2) {
  if (!(a1 >= 0.0 && a1 <= 1.0) || !(a2 >= 0.0 && a2 <= 1.0)) {
    throw std::invalid_argument("RiskLevels: levels must lie in [0, 1]");
  }
}

void require_crc_level(double alpha, std::size_t n, const char* which) {
  const double lower = 1.0 / (static_cast<double>(n) + 1.0);
  if (!(alpha > lower && alpha <= 1.0)) {
    throw std::invalid_argument(std::string(which) +
                                ": level must lie in (1/(n+1), 1] for n calibration samples");
  }
}

FeasibleSet::FeasibleSet(std::vector<GridPair> pairs, std::size_t m_lambda, std::size_t m_gamma,
                         std::string provenance)
    : pairs_(std::move(pairs)),
      m_lambda_(m_lambda),
      m_gamma_(m_gamma),
      provenance_(std::move(provenance)) {
  for (const GridPair& p : pairs_) {
    if (p.lambda_index >= m_lambda_ || p.gamma_index >= m_gamma_) {
      throw std::invalid_argument("FeasibleSet: pair index out of grid bounds");
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool FeasibleSet::contains(GridPair p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

double loss_sum1(const LossTable1& table, std::size_t lambda_index) {
  return compensated_sum(table.entries().data() + lambda_index, table.n_samples(),
                         table.n_lambda());
}

double empirical_risk1(const LossTable1& table, std::size_t lambda_index) {
  return loss_sum1(table, lambda_index) / static_cast<double>(table.n_samples());
}

double loss_sum2(const LossTable2& table, std::size_t lambda_index, std::size_t gamma_index) {
  const std::size_t cell = table.n_lambda() * table.n_gamma();
  const double* base = table.entries().data() + lambda_index * table.n_gamma() + gamma_index;
  return compensated_sum(base, table.n_samples(), cell);
}

double empirical_risk2(const LossTable2& table, std::size_t lambda_index,
                       std::size_t gamma_index) {
  return loss_sum2(table, lambda_index, gamma_index) / static_cast<double>(table.n_samples());
}

double loss_sum1(const LossTable1& table, std::span<const std::size_t> rows,
                 std::size_t lambda_index) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i : rows) {
    const double x = table.at(i, lambda_index);
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double loss_sum2(const LossTable2& table, std::span<const std::size_t> rows,
                 std::size_t lambda_index, std::size_t gamma_index) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i : rows) {
    const double x = table.at(i, lambda_index, gamma_index);
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace riskcal
