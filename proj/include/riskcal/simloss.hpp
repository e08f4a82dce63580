#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskcal/loss_table.hpp"
#include "riskcal/rng.hpp"

namespace riskcal {

// Synthetic per-sample loss functions with closed-form risk surfaces, used
// by the Monte Carlo guarantee checks. Two shapes:
//
//   threshold:  L1(l)    = b * 1{u > l}
//               L2(l, g) = c * max(1{w > l}, 1{v > g})
//     with u ~ U(u_lo, u_hi), w ~ U(w_lo, w_hi), v ~ U(v_lo, v_hi)
//
//   blend:      L1(l)    = b * (1 - l)^shape1
//               L2(l, g) = c * (mix*(1 - l) + (1 - mix)*(1 - g))^shape2
//
// b, c ~ U(scale_lo, scale_hi) independently of everything else. Both
// shapes are non-increasing in each threshold, land in [0, 1], and vanish
// at the top corner.
enum class SimLossKind { kThreshold, kBlend };

struct SimSample {
  double u = 0.0;
  double w = 0.0;
  double v = 0.0;
  double b = 1.0;
  double c = 1.0;
};

struct SimLossModel {
  SimLossKind kind = SimLossKind::kThreshold;
  double u_lo = 0.3, u_hi = 0.95;
  double w_lo = 0.2, w_hi = 0.9;
  double v_lo = 0.3, v_hi = 0.95;
  double scale_lo = 0.6, scale_hi = 1.0;
  double shape1 = 2.0, shape2 = 1.0, mix = 0.5;

  void validate() const;

  SimSample sample(Rng& rng) const;
  std::vector<SimSample> sample_many(std::size_t count, Rng& rng) const;

  double loss1(const SimSample& s, double lambda) const;
  double loss2(const SimSample& s, double lambda, double gamma) const;

  // Exact risk surfaces E[L1], E[L2].
  double risk1(double lambda) const;
  double risk2(double lambda, double gamma) const;

  // A constant satisfying the per-sample stage-2 feasibility bound
  // L2(lambda0, 1) <= alpha2 almost surely.
  double valid_lambda0(double alpha2) const;

  LossTable1 table1(std::span<const SimSample> samples, const ParameterGrid& grid) const;
  LossTable2 table2(std::span<const SimSample> samples, const ParameterGrid& grid_lambda,
                    const ParameterGrid& grid_gamma) const;
};

SimLossKind sim_loss_kind_from_string(const std::string& name);

}  // namespace riskcal
