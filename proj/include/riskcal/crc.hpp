#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "riskcal/loss_table.hpp"

namespace riskcal {

// Calibrated threshold floors. gamma0_by_lambda[a] is the stage-2 floor
// for grid_lambda[a], with 1.0 standing in when no gamma qualifies.
struct CrcThresholds {
  double lambda0_stage1 = 1.0;
  double lambda0_stage2 = 1.0;
  std::vector<double> gamma0_by_lambda;
};

// Deterministic partition of the calibration samples for the split
// calibrator: `fraction` of them (at least one, at most n-1) go to the
// first part.
struct SplitConfig {
  double fraction = 0.5;
  std::uint64_t seed = 0;
};

// Shuffle-split of [0, n) into two non-empty, ascending index sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const SplitConfig& config);

// Smallest lambda whose stage-1 calibration loss sum is <= (n+1)*alpha1 - 1.
// Throws infeasible_error when no grid point qualifies, which requires
// nonzero losses at lambda = 1.
double lambda_floor_stage1(const LossTable1& table, double alpha1);

// Same bound on the stage-2 losses at gamma = 1 (the last gamma grid point).
double lambda_floor_stage2(const LossTable2& table, double alpha2);

// Smallest gamma with stage-2 loss sum <= (n+1)*alpha2 - 1 at the given
// lambda; 1.0 when the set is empty. The subset overload restricts the sum
// to the given sample rows (n = rows.size()).
double gamma_floor(const LossTable2& table, std::size_t lambda_index, double alpha2);
double gamma_floor(const LossTable2& table, std::span<const std::size_t> rows,
                   std::size_t lambda_index, double alpha2);

CrcThresholds compute_crc_thresholds(const LossTable1& table1, const LossTable2& table2,
                                     const RiskLevels& levels);

// Grid ceiling of t*(lambda floors' max) + (1-t); equals 1.0 at t = 0 and
// the ceiled floor at t = 1.
double lambda_from_t(double t, const CrcThresholds& thresholds,
                     const ParameterGrid& grid_lambda);

// All pairs with lambda at or above the ceiled floor and gamma at or above
// that lambda's stage-2 floor.
FeasibleSet crc_feasible_set(const LossTable1& table1, const LossTable2& table2,
                             const RiskLevels& levels);

// The calibrated pair at a fixed t.
std::pair<double, double> crc_point(const LossTable1& table1, const LossTable2& table2,
                                    const RiskLevels& levels, double t);

// Smallest lambda such that every row's stage-2 loss at gamma = 1 is
// <= alpha2; 1.0 when none qualifies. Used to estimate the feasibility
// constant for the split calibrator when it is not known.
double estimate_lambda0(const LossTable2& table, std::span<const std::size_t> rows,
                        double alpha2);
double estimate_lambda0(const LossTable2& table, double alpha2);

struct SplitCrcResult {
  FeasibleSet set;
  double lambda0 = 1.0;        // the feasibility constant used (given or estimated)
  double lambda_tilde0 = 1.0;  // stage-1 floor on the first part
  double gamma_bar = 1.0;      // uniform stage-2 floor on the second part
  bool lambda0_estimated = false;
};

// Split calibrator: stage-1 floor on the first part, uniform stage-2 floor
// on the second part at the most aggressive lambda. lambda0 == nullopt
// estimates the constant from the first part.
SplitCrcResult crc_split_calibrate(const LossTable1& table1, const LossTable2& table2,
                                   const RiskLevels& levels, const SplitConfig& split,
                                   std::optional<double> lambda0);

FeasibleSet crc_split_feasible_set(const LossTable1& table1, const LossTable2& table2,
                                   const RiskLevels& levels, const SplitConfig& split,
                                   std::optional<double> lambda0);

// Per-t calibrated pair for the split calibrator; the gamma floor is
// recomputed on the second part at the chosen lambda.
std::pair<double, double> crc_split_point(const LossTable1& table1, const LossTable2& table2,
                                          const RiskLevels& levels, const SplitConfig& split,
                                          std::optional<double> lambda0, double t);

}  // namespace riskcal
