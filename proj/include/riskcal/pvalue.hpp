#pragma once

namespace riskcal {

// Bernoulli KL divergence a*log(a/b) + (1-a)*log((1-a)/(1-b)) with the
// a -> 0 and a -> 1 limits. Requires a in [0, 1] and b in (0, 1); the
// result is >= 0 with equality iff a == b.
double kl_bernoulli(double a, double b);

// P(Bin(n, p) <= min(k, n)), accumulated from log-space pmf terms so the
// deep lower tail keeps full relative precision. k > n clamps to 1;
// k < 0 yields 0.
double binom_cdf(long long k, long long n, double p);

// Hoeffding-Bentkus p-value for the one-sided test of "mean loss > alpha"
// given an empirical mean rhat of n bounded losses:
//   min(1, exp(-n*h(rhat ^ alpha, alpha)), e * P(Bin(n, alpha) <= ceil(n*rhat))).
// Values are capped at 1 and always positive.
double hb_pvalue(double rhat, long long n, double alpha);

// Same p-value with the binomial tail count taken as ceil(loss_sum) of the
// raw loss sum, sidestepping the n*(sum/n) float round trip when rhat is a
// table mean. ceil is the identity on exact integers.
double hb_pvalue_from_sum(double loss_sum, long long n, double alpha);

}  // namespace riskcal
