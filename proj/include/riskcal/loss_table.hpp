#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskcal/grid.hpp"

namespace riskcal {

// Neumaier-compensated sum over count elements spaced `stride` apart,
// accumulated in index order. All empirical sums in this library go
// through here with a fixed (row-major) order, so results are
// reproducible bit for bit.
double compensated_sum(const double* data, std::size_t count, std::size_t stride);

// Per-sample first-stage losses evaluated at every grid threshold; one row
// per calibration sample, entries in [0, 1]. A table flagged monotone has
// non-increasing rows, which the constructor verifies.
class LossTable1 {
 public:
  LossTable1(std::vector<double> entries, ParameterGrid grid, bool monotone);

  std::size_t n_samples() const { return n_; }
  std::size_t n_lambda() const { return grid_.size(); }
  double at(std::size_t i, std::size_t j) const { return entries_[i * grid_.size() + j]; }
  const ParameterGrid& grid() const { return grid_; }
  bool monotone() const { return monotone_; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::vector<double> entries_;  // row-major n x m
  ParameterGrid grid_;
  std::size_t n_;
  bool monotone_;
};

// Per-sample second-stage losses on the lambda x gamma grid product.
// Monotone tables are non-increasing along both grid axes in every slice.
class LossTable2 {
 public:
  LossTable2(std::vector<double> entries, ParameterGrid grid_lambda, ParameterGrid grid_gamma,
             bool monotone);

  std::size_t n_samples() const { return n_; }
  std::size_t n_lambda() const { return grid_lambda_.size(); }
  std::size_t n_gamma() const { return grid_gamma_.size(); }
  double at(std::size_t i, std::size_t a, std::size_t b) const {
    return entries_[(i * grid_lambda_.size() + a) * grid_gamma_.size() + b];
  }
  const ParameterGrid& grid_lambda() const { return grid_lambda_; }
  const ParameterGrid& grid_gamma() const { return grid_gamma_; }
  bool monotone() const { return monotone_; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::vector<double> entries_;  // n x m_lambda x m_gamma
  ParameterGrid grid_lambda_;
  ParameterGrid grid_gamma_;
  std::size_t n_;
  bool monotone_;
};

// Target risk levels for the two stages.
struct RiskLevels {
  double alpha1 = 0.1;
  double alpha2 = 0.1;

  RiskLevels() = default;
  RiskLevels(double a1, double a2);
};

// Checks alpha in (1/(n+1), 1], the admissible range for the conformal
// calibrators given n calibration samples.
void require_crc_level(double alpha, std::size_t n, const char* which);

struct GridPair {
  std::size_t lambda_index = 0;
  std::size_t gamma_index = 0;

  friend bool operator==(const GridPair&, const GridPair&) = default;
  friend auto operator<=>(const GridPair&, const GridPair&) = default;
};

// Collection of certified (lambda, gamma) grid-index pairs. Stored sorted
// and deduplicated; indices are bounds-checked against the grid sizes.
class FeasibleSet {
 public:
  FeasibleSet(std::vector<GridPair> pairs, std::size_t m_lambda, std::size_t m_gamma,
              std::string provenance);

  const std::vector<GridPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(GridPair p) const;
  std::size_t m_lambda() const { return m_lambda_; }
  std::size_t m_gamma() const { return m_gamma_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<GridPair> pairs_;
  std::size_t m_lambda_;
  std::size_t m_gamma_;
  std::string provenance_;
};

// Column sums and empirical risks. Sums run over samples in row order.
double loss_sum1(const LossTable1& table, std::size_t lambda_index);
double empirical_risk1(const LossTable1& table, std::size_t lambda_index);
double loss_sum2(const LossTable2& table, std::size_t lambda_index, std::size_t gamma_index);
double empirical_risk2(const LossTable2& table, std::size_t lambda_index,
                       std::size_t gamma_index);

// Same sums restricted to a subset of sample rows (given in the order to
// accumulate, normally ascending).
double loss_sum1(const LossTable1& table, std::span<const std::size_t> rows,
                 std::size_t lambda_index);
double loss_sum2(const LossTable2& table, std::span<const std::size_t> rows,
                 std::size_t lambda_index, std::size_t gamma_index);

}  // namespace riskcal
