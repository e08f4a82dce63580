#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskcal/crc.hpp"
#include "riskcal/ltt.hpp"
#include "riskcal/simloss.hpp"

namespace riskcal {

// Monte Carlo validation of the calibration guarantees against a loss
// model whose true risk surfaces are known in closed form.
//
//   "ltt-fwer": fraction of trials in which the certified set contains a
//       pair whose true risk exceeds its target, for each procedure;
//       bounded by delta plus three binomial standard errors.
//   "tcrc":     mean held-out losses at the calibrated pair: stage 1
//       against alpha1 + 3 SE (finite sample), stage 2 against
//       alpha2 + stage2_slack (asymptotic).
//   "tcrc-s":   both stages against alpha + 3 SE (finite sample), using a
//       feasibility constant valid for the model.
struct McConfig {
  std::string check = "tcrc";
  std::size_t trials = 1000;
  std::size_t n = 100;
  ParameterGrid grid_lambda = ParameterGrid::linspace(0.0, 1.0, 21);
  ParameterGrid grid_gamma = ParameterGrid::linspace(0.0, 1.0, 21);
  RiskLevels levels{0.1, 0.1};
  double delta = 0.1;
  double w = 0.5;
  std::vector<double> t_values = {0.0, 0.5, 1.0};
  SimLossModel model;
  double split_fraction = 0.5;
  std::optional<double> lambda0;  // tcrc-s; defaults to model.valid_lambda0(alpha2)
  double stage2_slack = 0.015;
  std::uint64_t seed = 0;

  void validate() const;
};

struct McCheck {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  double se = 0.0;
  bool pass = false;
};

struct McReport {
  std::vector<McCheck> checks;

  bool all_pass() const;
  std::string to_text() const;
};

McReport mc_validate(const McConfig& config);

}  // namespace riskcal
