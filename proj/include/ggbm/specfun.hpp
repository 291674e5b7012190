#pragma once

#include "ggbm/accuracy.hpp"

namespace ggbm {

// Gamma function for real argument (poles at non-positive integers return
// +/-infinity). Lanczos-class approximation, >= 1e-12 relative accuracy on
// the positive axis; reflection formula for negative non-integer arguments.
double gamma_fn(double x);

// log|Gamma(x)| for x > 0. Throws domain_error for x <= 0.
double log_gamma(double x);

// 1/Gamma(x) for any real x; exactly 0 at the poles (x = 0, -1, -2, ...).
double rgamma(double x);

// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha*k+1),
// alpha in (0,2]. Taylor series for z <= budget.z_switch; larger positive z
// keeps the (cancellation-free) series, summed in the log domain, for as long
// as it converges within budget.max_terms, then hands off to the exponential
// asymptotic form (1/alpha)*exp(z^{1/alpha}) - algebraic corrections, which
// is only used where the exponential dominates. Overflow returns +infinity.
double ml1(double alpha, double z, const AccuracyBudget& budget = {});

// Two-parameter Mittag-Leffler E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha*k+beta).
double ml2(double alpha, double beta, double z, const AccuracyBudget& budget = {});

// Three-parameter Mittag-Leffler E^gamma_{alpha,beta}(z)
//   = sum_n (gamma)_n z^n / (Gamma(alpha*n+beta) n!)
// via the Pochhammer recurrence (gamma)_{n+1} = (gamma)_n (gamma+n). Series only;
// all uses in this library have moderate |z|.
double ml3(double alpha, double beta, double gamma, double z,
           const AccuracyBudget& budget = {});

// Kummer confluent hypergeometric 1F1(a; b; z) = sum_k (a)_k/(b)_k z^k/k!.
// b must not be a non-positive integer.
double kummer_1f1(double a, double b, double z, const AccuracyBudget& budget = {});

// Lower incomplete gamma gamma(a, z) = int_0^z t^{a-1} e^{-t} dt, a > 0, z >= 0.
// Series for z < a+1, continued fraction otherwise (non-normalized).
double lower_incomplete_gamma(double a, double z);

// Regularized form P(a, z) = gamma(a, z)/Gamma(a) in [0, 1].
double gamma_p(double a, double z);

// Standard normal CDF.
double std_normal_cdf(double x);

// Density of the standard one-sided alpha-stable random variable X with
// Laplace transform E[e^{-sX}] = e^{-s^alpha}, alpha in (0,1), at x > 0
// (0 for x <= 0). Evaluated by a convergent descending-power series where it
// converges cleanly, otherwise by a saddle-anchored integral representation;
// accurate over the whole support including the alpha -> 1 concentration regime.
double one_sided_stable_pdf(double alpha, double x);

// log of one_sided_stable_pdf at x = exp(log_x); -infinity where the density
// underflows. The log-domain form stays finite for extreme x where x itself
// would overflow/underflow a double. `rel_tol` bounds the relative error of
// the integral-representation fallback; callers that consume the density
// inside their own quadrature can relax it well above the default to trade
// unused precision for speed (the series path is exact either way).
double one_sided_stable_log_pdf(double alpha, double log_x, double rel_tol = 1e-13);

} // namespace ggbm
