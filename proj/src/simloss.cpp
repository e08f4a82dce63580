#include "riskcal/simloss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcal {

namespace {

// CDF of U(lo, hi) at x.
double ucdf(double x, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

}  // namespace

void SimLossModel::validate() const {
  const auto check_support = [](double lo, double hi, const char* what) {
    if (!(lo >= 0.0 && lo < hi && hi < 1.0)) {
      throw std::invalid_argument(std::string("SimLossModel: ") + what +
                                  " support must satisfy 0 <= lo < hi < 1");
    }
  };
  check_support(u_lo, u_hi, "u");
  check_support(w_lo, w_hi, "w");
  check_support(v_lo, v_hi, "v");
  if (!(scale_lo >= 0.0 && scale_lo <= scale_hi && scale_hi <= 1.0)) {
    throw std::invalid_argument("SimLossModel: scales must satisfy 0 <= lo <= hi <= 1");
  }
  if (kind == SimLossKind::kBlend) {
    if (!(shape1 >= 1.0 && shape2 >= 1.0)) {
      throw std::invalid_argument("SimLossModel: shapes must be >= 1");
    }
    if (!(mix > 0.0 && mix < 1.0)) {
      throw std::invalid_argument("SimLossModel: mix must lie in (0, 1)");
    }
  }
}

SimSample SimLossModel::sample(Rng& rng) const {
  SimSample s;
  s.u = uniform_in(rng, u_lo, u_hi);
  s.w = uniform_in(rng, w_lo, w_hi);
  s.v = uniform_in(rng, v_lo, v_hi);
  s.b = uniform_in(rng, scale_lo, scale_hi);
  s.c = uniform_in(rng, scale_lo, scale_hi);
  return s;
}

std::vector<SimSample> SimLossModel::sample_many(std::size_t count, Rng& rng) const {
  std::vector<SimSample> out(count);
  for (auto& s : out) {
    s = sample(rng);
  }
  return out;
}

double SimLossModel::loss1(const SimSample& s, double lambda) const {
  if (kind == SimLossKind::kThreshold) {
    return s.u > lambda ? s.b : 0.0;
  }
  return s.b * std::pow(1.0 - lambda, shape1);
}

double SimLossModel::loss2(const SimSample& s, double lambda, double gamma) const {
  if (kind == SimLossKind::kThreshold) {
    return (s.w > lambda || s.v > gamma) ? s.c : 0.0;
  }
  return s.c * std::pow(mix * (1.0 - lambda) + (1.0 - mix) * (1.0 - gamma), shape2);
}

double SimLossModel::risk1(double lambda) const {
  const double mean_scale = 0.5 * (scale_lo + scale_hi);
  if (kind == SimLossKind::kThreshold) {
    return mean_scale * (1.0 - ucdf(lambda, u_lo, u_hi));
  }
  return mean_scale * std::pow(1.0 - lambda, shape1);
}

double SimLossModel::risk2(double lambda, double gamma) const {
  const double mean_scale = 0.5 * (scale_lo + scale_hi);
  if (kind == SimLossKind::kThreshold) {
    return mean_scale * (1.0 - ucdf(lambda, w_lo, w_hi) * ucdf(gamma, v_lo, v_hi));
  }
  return mean_scale * std::pow(mix * (1.0 - lambda) + (1.0 - mix) * (1.0 - gamma), shape2);
}

double SimLossModel::valid_lambda0(double alpha2) const {
  if (kind == SimLossKind::kThreshold) {
    // L2(l, 1) = c * 1{w > l}: any l at or above the w support works;
    // below it the loss can reach scale_hi.
    return scale_hi <= alpha2 ? 0.0 : w_hi;
  }
  // c * (mix * (1 - l))^shape2 <= alpha2 for all c <= scale_hi
  if (scale_hi == 0.0) return 0.0;
  const double margin = std::pow(alpha2 / scale_hi, 1.0 / shape2) / mix;
  return std::clamp(1.0 - margin, 0.0, 1.0);
}

LossTable1 SimLossModel::table1(std::span<const SimSample> samples,
                                const ParameterGrid& grid) const {
  const std::size_t m = grid.size();
  std::vector<double> entries(samples.size() * m);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      entries[i * m + j] = loss1(samples[i], grid[j]);
    }
  }
  return LossTable1(std::move(entries), grid, /*monotone=*/true);
}

LossTable2 SimLossModel::table2(std::span<const SimSample> samples,
                                const ParameterGrid& grid_lambda,
                                const ParameterGrid& grid_gamma) const {
  const std::size_t ml = grid_lambda.size();
  const std::size_t mg = grid_gamma.size();
  std::vector<double> entries(samples.size() * ml * mg);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t a = 0; a < ml; ++a) {
      for (std::size_t b = 0; b < mg; ++b) {
        entries[(i * ml + a) * mg + b] = loss2(samples[i], grid_lambda[a], grid_gamma[b]);
      }
    }
  }
  return LossTable2(std::move(entries), grid_lambda, grid_gamma, /*monotone=*/true);
}

SimLossKind sim_loss_kind_from_string(const std::string& name) {
  if (name == "threshold") return SimLossKind::kThreshold;
  if (name == "blend") return SimLossKind::kBlend;
  throw std::invalid_argument("unknown synthetic loss kind: " + name);
}

}  // namespace riskcal
