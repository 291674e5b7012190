#pragma once

#include "ggbm/accuracy.hpp"
#include "ggbm/kernels.hpp"
#include "ggbm/lapinv.hpp"
#include "ggbm/market.hpp"

namespace ggbm {

// <x(t)> in closed/series form per family:
//   Standard:        x0 e^{mu t}
//   Subdiffusive:    x0 E_alpha(mu t^alpha)
//   Tempered:        x0 [1 + (1/alpha) int_0^{t^alpha} e^{-v^{1/alpha}/tau} g_mu(v) dv],
//                    g_c(v) = sum_{k>=1} c^k v^{k-1}/Gamma(alpha k)
//                    (the substitution t' = v^{1/alpha} removes the t'->0
//                    singularity of e^{-t'/tau} t'^{-1} E_{alpha,0}(c t'^alpha))
//   MixStandardSub:  x0 sum_j (w1 c)^j t^{alpha j} E^{j+1}_{1, alpha j+1}(w2 c t)
//   MixSubSub:       x0 sum_j (w1 c)^j t^{alpha1 j} E^{j+1}_{alpha2, alpha1 j+1}(w2 c t^{alpha2})
// with c = mu.
double analytic_mean(const Kernel& k, const MarketParams& m, double t,
                     const AccuracyBudget& budget = {});

// <x^2(t)>: same expressions with c = sigma^2 + 2 mu.
double analytic_msd(const Kernel& k, const MarketParams& m, double t,
                    const AccuracyBudget& budget = {});

// Numerical-Laplace route for arbitrary n >= 0:
//   <x^n(t)> = x0^n * L^{-1}{ 1 / (s (1 - c eta_hat(s))) }(t),
//   c = sigma^2 n(n-1)/2 + mu n.
// n = 0 returns exactly 1. The Talbot contour is scaled to dominate the real
// pole where c*eta_hat(s*) = 1, so moderate growth factors invert cleanly;
// results exceeding the double range throw numeric_error (dynamic range).
double generic_moment(const Kernel& k, const MarketParams& m, int n, double t,
                      const InversionConfig& cfg = {});

// <log x(t)> = log x0 + mubar * I(t).
double log_mean(const Kernel& k, const MarketParams& m, double t);

// Var[log x(t)] = sigma^2 I(t) + mubar^2 (2 J(t) - I(t)^2) with
// J = L^{-1}{eta_hat(s)^2 / s}, in closed form per family.
double log_variance(const Kernel& k, const MarketParams& m, double t);

// Same quantity with J evaluated by adaptive quadrature of the convolution
// J(t) = int_0^t eta(s) I(t-s) ds (independent route for cross-checks).
double log_variance_quadrature(const Kernel& k, const MarketParams& m, double t);

// J(t) = L^{-1}{eta_hat^2/s}(t) closed form (exposed for tests).
double kernel_J(const Kernel& k, double t);
double kernel_J_quadrature(const Kernel& k, double t);

// Expected periodic log return mubar * [I(t+dt) - I(t)] / dt.
double periodic_log_return(const Kernel& k, const MarketParams& m, double t,
                           double dt);

// dt -> 0 limit: mubar * eta(t). Requires t > 0 for singular kernels.
double log_return_rate(const Kernel& k, const MarketParams& m, double t);

} // namespace ggbm
