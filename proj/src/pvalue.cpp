#include "riskcal/pvalue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riskcal {

double kl_bernoulli(double a, double b) {
  if (!(b > 0.0 && b < 1.0)) {
    throw std::domain_error("kl_bernoulli: b must lie in (0, 1)");
  }
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::domain_error("kl_bernoulli: a must lie in [0, 1]");
  }
  if (a == 0.0) {
    return -std::log1p(-b);
  }
  if (a == 1.0) {
    return -std::log(b);
  }
  const double v = a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  return std::max(0.0, v);
}

double binom_cdf(long long k, long long n, double p) {
  if (n < 1) {
    throw std::domain_error("binom_cdf: n must be >= 1");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binom_cdf: p must lie in [0, 1]");
  }
  if (k < 0) {
    return 0.0;
  }
  if (p == 0.0) {
    return 1.0;
  }
  if (p == 1.0) {
    return k >= n ? 1.0 : 0.0;
  }
  const long long kk = std::min(k, n);
  if (kk == n) {
    return 1.0;
  }

  // Anchor at the distribution mode (capped at kk), where the pmf is
  // largest, then walk outward with the exact term ratios. The single
  // log-gamma evaluation only scales the whole sum, and long double keeps
  // the recurrence error below the ten-digit requirement at n = 1e6.
  const auto pl = static_cast<long double>(p);
  const auto ql = 1.0L - pl;
  const long long mode =
      std::min(kk, static_cast<long long>(static_cast<long double>(n + 1) * pl));
  const long double log_anchor =
      std::lgamma(static_cast<long double>(n) + 1.0L) -
      std::lgamma(static_cast<long double>(mode) + 1.0L) -
      std::lgamma(static_cast<long double>(n - mode) + 1.0L) +
      static_cast<long double>(mode) * std::log(pl) +
      static_cast<long double>(n - mode) * std::log1p(-pl);
  const long double anchor = std::exp(log_anchor);

  long double sum = anchor;
  long double term = anchor;
  for (long long i = mode; i >= 1; --i) {  // terms shrink below the mode
    term *= static_cast<long double>(i) / static_cast<long double>(n - i + 1) * (ql / pl);
    sum += term;
    if (term < sum * 1e-25L) {
      break;
    }
  }
  term = anchor;
  for (long long i = mode + 1; i <= kk; ++i) {  // and above it
    term *= static_cast<long double>(n - i + 1) / static_cast<long double>(i) * (pl / ql);
    sum += term;
    if (term < sum * 1e-25L) {
      break;
    }
  }
  return std::min(1.0, static_cast<double>(sum));
}

namespace {

double hb_core(double rhat, long long tail_count, long long n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("hb_pvalue: alpha must lie in (0, 1)");
  }
  if (n < 1) {
    throw std::domain_error("hb_pvalue: n must be >= 1");
  }
  const double p_hoeffding =
      std::exp(-static_cast<double>(n) * kl_bernoulli(std::min(rhat, alpha), alpha));
  const double p_bentkus = std::numbers::e * binom_cdf(tail_count, n, alpha);
  return std::min({1.0, p_hoeffding, p_bentkus});
}

}  // namespace

double hb_pvalue(double rhat, long long n, double alpha) {
  if (!(rhat >= 0.0 && rhat <= 1.0)) {
    throw std::domain_error("hb_pvalue: rhat must lie in [0, 1]");
  }
  const auto tail_count =
      static_cast<long long>(std::ceil(static_cast<double>(n) * rhat));
  return hb_core(rhat, tail_count, n, alpha);
}

double hb_pvalue_from_sum(double loss_sum, long long n, double alpha) {
  if (!(loss_sum >= 0.0)) {
    throw std::domain_error("hb_pvalue_from_sum: loss_sum must be >= 0");
  }
  const double rhat = std::min(1.0, loss_sum / static_cast<double>(n));
  const auto tail_count = static_cast<long long>(std::ceil(loss_sum));
  return hb_core(rhat, tail_count, n, alpha);
}

}  // namespace riskcal
