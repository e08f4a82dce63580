#include "riskcal/crc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riskcal/errors.hpp"
#include "riskcal/rng.hpp"

namespace riskcal {

namespace {

void require_monotone1(const LossTable1& table) {
  if (!table.monotone()) {
    throw std::invalid_argument("calibration requires a monotone stage-1 loss table");
  }
}

void require_monotone2(const LossTable2& table) {
  if (!table.monotone()) {
    throw std::invalid_argument("calibration requires a monotone stage-2 loss table");
  }
}

// Last gamma grid point must be 1.0 so the lambda-only floor is defined;
// ParameterGrid guarantees it, this guards hand-built tables.
void require_gamma_top(const LossTable2& table) {
  if (table.grid_gamma().max_value() != 1.0) {
    throw std::invalid_argument("stage-2 gamma grid must end at 1.0");
  }
}

std::size_t sentinel_or(std::size_t found, std::size_t m) {
  return found < m ? found : m - 1;  // sentinel value 1.0 is the last grid point
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const SplitConfig& config) {
  if (n < 2) {
    throw std::invalid_argument("split_indices: need at least two samples");
  }
  if (!(config.fraction > 0.0 && config.fraction < 1.0)) {
    throw std::invalid_argument("split_indices: fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  shuffle_in_place(order, rng);

  auto k = static_cast<std::size_t>(
      std::llround(config.fraction * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n - 1);
  std::vector<std::size_t> first(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> second(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

namespace {

// Index of the smallest lambda with column sum <= (n+1)*alpha - 1 over the
// given rows; grid size when none qualifies.
std::size_t stage1_floor_index(const LossTable1& table, std::span<const std::size_t> rows,
                               double alpha) {
  const double bound = (static_cast<double>(rows.size()) + 1.0) * alpha - 1.0;
  for (std::size_t j = 0; j < table.n_lambda(); ++j) {
    if (loss_sum1(table, rows, j) <= bound) {
      return j;
    }
  }
  return table.n_lambda();
}

std::size_t stage2_lambda_floor_index(const LossTable2& table, std::span<const std::size_t> rows,
                                      double alpha) {
  const double bound = (static_cast<double>(rows.size()) + 1.0) * alpha - 1.0;
  const std::size_t top = table.n_gamma() - 1;
  for (std::size_t a = 0; a < table.n_lambda(); ++a) {
    if (loss_sum2(table, rows, a, top) <= bound) {
      return a;
    }
  }
  return table.n_lambda();
}

std::size_t gamma_floor_index(const LossTable2& table, std::span<const std::size_t> rows,
                              std::size_t lambda_index, double alpha) {
  const double bound = (static_cast<double>(rows.size()) + 1.0) * alpha - 1.0;
  for (std::size_t b = 0; b < table.n_gamma(); ++b) {
    if (loss_sum2(table, rows, lambda_index, b) <= bound) {
      return b;
    }
  }
  return table.n_gamma();
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

double lambda_floor_stage1(const LossTable1& table, double alpha1) {
  require_monotone1(table);
  require_crc_level(alpha1, table.n_samples(), "lambda_floor_stage1");
  const auto rows = all_rows(table.n_samples());
  const std::size_t j = stage1_floor_index(table, rows, alpha1);
  if (j == table.n_lambda()) {
    throw infeasible_error(
        "lambda_floor_stage1: no grid point satisfies the bound; stage-1 losses at lambda = 1 "
        "are too large");
  }
  return table.grid()[j];
}

double lambda_floor_stage2(const LossTable2& table, double alpha2) {
  require_monotone2(table);
  require_gamma_top(table);
  require_crc_level(alpha2, table.n_samples(), "lambda_floor_stage2");
  const auto rows = all_rows(table.n_samples());
  const std::size_t a = stage2_lambda_floor_index(table, rows, alpha2);
  if (a == table.n_lambda()) {
    throw infeasible_error(
        "lambda_floor_stage2: no grid point satisfies the bound; stage-2 losses at (1, 1) are "
        "too large");
  }
  return table.grid_lambda()[a];
}

double gamma_floor(const LossTable2& table, std::size_t lambda_index, double alpha2) {
  const auto rows = all_rows(table.n_samples());
  return gamma_floor(table, rows, lambda_index, alpha2);
}

double gamma_floor(const LossTable2& table, std::span<const std::size_t> rows,
                   std::size_t lambda_index, double alpha2) {
  require_monotone2(table);
  if (lambda_index >= table.n_lambda()) {
    throw std::invalid_argument("gamma_floor: lambda index out of bounds");
  }
  const std::size_t b = gamma_floor_index(table, rows, lambda_index, alpha2);
  return b < table.n_gamma() ? table.grid_gamma()[b] : 1.0;
}

CrcThresholds compute_crc_thresholds(const LossTable1& table1, const LossTable2& table2,
                                     const RiskLevels& levels) {
  if (table1.n_samples() != table2.n_samples()) {
    throw std::invalid_argument("compute_crc_thresholds: tables must share the sample count");
  }
  if (!(table1.grid() == table2.grid_lambda())) {
    throw std::invalid_argument("compute_crc_thresholds: tables must share the lambda grid");
  }
  CrcThresholds out;
  out.lambda0_stage1 = lambda_floor_stage1(table1, levels.alpha1);
  out.lambda0_stage2 = lambda_floor_stage2(table2, levels.alpha2);
  out.gamma0_by_lambda.resize(table2.n_lambda());
  const auto rows = all_rows(table2.n_samples());
  for (std::size_t a = 0; a < table2.n_lambda(); ++a) {
    const std::size_t b = gamma_floor_index(table2, rows, a, levels.alpha2);
    out.gamma0_by_lambda[a] = b < table2.n_gamma() ? table2.grid_gamma()[b] : 1.0;
  }
  return out;
}

double lambda_from_t(double t, const CrcThresholds& thresholds,
                     const ParameterGrid& grid_lambda) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("lambda_from_t: t must lie in [0, 1]");
  }
  const double floor_value = std::max(thresholds.lambda0_stage1, thresholds.lambda0_stage2);
  return ceil_to_grid(t * floor_value + (1.0 - t), grid_lambda);
}

FeasibleSet crc_feasible_set(const LossTable1& table1, const LossTable2& table2,
                             const RiskLevels& levels) {
  const CrcThresholds thr = compute_crc_thresholds(table1, table2, levels);
  const ParameterGrid& gl = table2.grid_lambda();
  const ParameterGrid& gg = table2.grid_gamma();
  const std::size_t a0 = gl.ceil_index(std::max(thr.lambda0_stage1, thr.lambda0_stage2));
  std::vector<GridPair> pairs;
  for (std::size_t a = a0; a < gl.size(); ++a) {
    const std::size_t b0 = gg.ceil_index(thr.gamma0_by_lambda[a]);
    for (std::size_t b = b0; b < gg.size(); ++b) {
      pairs.push_back({a, b});
    }
  }
  return FeasibleSet(std::move(pairs), gl.size(), gg.size(), "tcrc");
}

std::pair<double, double> crc_point(const LossTable1& table1, const LossTable2& table2,
                                    const RiskLevels& levels, double t) {
  const CrcThresholds thr = compute_crc_thresholds(table1, table2, levels);
  const double lambda = lambda_from_t(t, thr, table2.grid_lambda());
  const std::size_t a = table2.grid_lambda().ceil_index(lambda);
  return {lambda, thr.gamma0_by_lambda[a]};
}

double estimate_lambda0(const LossTable2& table, std::span<const std::size_t> rows,
                        double alpha2) {
  require_monotone2(table);
  require_gamma_top(table);
  const std::size_t top = table.n_gamma() - 1;
  for (std::size_t a = 0; a < table.n_lambda(); ++a) {
    double worst = 0.0;
    for (std::size_t i : rows) {
      worst = std::max(worst, table.at(i, a, top));
    }
    if (worst <= alpha2) {
      return table.grid_lambda()[a];
    }
  }
  return 1.0;
}

double estimate_lambda0(const LossTable2& table, double alpha2) {
  const auto rows = all_rows(table.n_samples());
  return estimate_lambda0(table, rows, alpha2);
}

SplitCrcResult crc_split_calibrate(const LossTable1& table1, const LossTable2& table2,
                                   const RiskLevels& levels, const SplitConfig& split,
                                   std::optional<double> lambda0) {
  require_monotone1(table1);
  require_monotone2(table2);
  require_gamma_top(table2);
  if (table1.n_samples() != table2.n_samples()) {
    throw std::invalid_argument("crc_split_calibrate: tables must share the sample count");
  }
  if (!(table1.grid() == table2.grid_lambda())) {
    throw std::invalid_argument("crc_split_calibrate: tables must share the lambda grid");
  }
  const auto [part1, part2] = split_indices(table1.n_samples(), split);
  require_crc_level(levels.alpha1, part1.size(), "crc_split_calibrate: alpha1");
  require_crc_level(levels.alpha2, part1.size(), "crc_split_calibrate: alpha2");

  SplitCrcResult result{FeasibleSet({}, table1.n_lambda(), table2.n_gamma(), "tcrc-s")};

  const std::size_t j1 = stage1_floor_index(table1, part1, levels.alpha1);
  if (j1 == table1.n_lambda()) {
    throw infeasible_error(
        "crc_split_calibrate: no lambda satisfies the stage-1 bound on the first part");
  }
  result.lambda_tilde0 = table1.grid()[j1];

  if (lambda0.has_value()) {
    if (!(*lambda0 >= 0.0 && *lambda0 <= 1.0)) {
      throw std::invalid_argument("crc_split_calibrate: lambda0 must lie in [0, 1]");
    }
    result.lambda0 = *lambda0;
  } else {
    result.lambda0 = estimate_lambda0(table2, part1, levels.alpha2);
    result.lambda0_estimated = true;
  }

  const ParameterGrid& gl = table2.grid_lambda();
  const ParameterGrid& gg = table2.grid_gamma();
  const std::size_t a0 = gl.ceil_index(std::max(result.lambda_tilde0, result.lambda0));
  // gamma bar: uniform floor at the most aggressive lambda (t = 1).
  const std::size_t b0 =
      sentinel_or(gamma_floor_index(table2, part2, a0, levels.alpha2), table2.n_gamma());
  result.gamma_bar = gg[b0];

  std::vector<GridPair> pairs;
  for (std::size_t a = a0; a < gl.size(); ++a) {
    for (std::size_t b = b0; b < gg.size(); ++b) {
      pairs.push_back({a, b});
    }
  }
  result.set = FeasibleSet(std::move(pairs), gl.size(), gg.size(), "tcrc-s");
  return result;
}

FeasibleSet crc_split_feasible_set(const LossTable1& table1, const LossTable2& table2,
                                   const RiskLevels& levels, const SplitConfig& split,
                                   std::optional<double> lambda0) {
  return crc_split_calibrate(table1, table2, levels, split, lambda0).set;
}

std::pair<double, double> crc_split_point(const LossTable1& table1, const LossTable2& table2,
                                          const RiskLevels& levels, const SplitConfig& split,
                                          std::optional<double> lambda0, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("crc_split_point: t must lie in [0, 1]");
  }
  const SplitCrcResult cal = crc_split_calibrate(table1, table2, levels, split, lambda0);
  const auto [part1, part2] = split_indices(table1.n_samples(), split);
  const ParameterGrid& gl = table2.grid_lambda();
  const double floor_value = std::max(cal.lambda_tilde0, cal.lambda0);
  const double lambda = ceil_to_grid(t * floor_value + (1.0 - t), gl);
  const std::size_t a = gl.ceil_index(lambda);
  const std::size_t b =
      sentinel_or(gamma_floor_index(table2, part2, a, levels.alpha2), table2.n_gamma());
  return {lambda, table2.grid_gamma()[b]};
}

}  // namespace riskcal
