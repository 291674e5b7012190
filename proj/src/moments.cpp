#include "ggbm/moments.hpp"

#include "ggbm/specfun.hpp"

#include <cmath>
#include <limits>

namespace ggbm {

namespace {

// Recursive adaptive Simpson with absolute tolerance (Richardson-corrected).
template <typename F>
double simpson_rec(const F& f, double a, double fa, double mid, double fm, double b,
                   double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
    double flm = f(lm), frm = f(rm);
    double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) < 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, lm, flm, mid, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, mid, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double mid = 0.5 * (a + b);
    double fa = f(a), fm = f(mid), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, mid, fm, b, fb, whole, tol, 30);
}

// g_c(v) = sum_{k>=1} c^k v^{k-1} / Gamma(alpha k)
double g_series(double alpha, double c, double v, const AccuracyBudget& budget) {
    long double sum = 0.0L;
    double coef = c; // c^k v^{k-1}
    int below = 0;
    for (int k = 1; k < budget.max_terms; ++k) {
        double term = coef * rgamma(alpha * k);
        sum += static_cast<long double>(term);
        if (std::abs(term) < budget.abs_tol * 1e-3) {
            if (++below >= 2) return static_cast<double>(sum);
        } else {
            below = 0;
        }
        coef *= c * v;
        if (std::isinf(coef))
            throw numeric_error("moments: tempered-mean series overflow");
    }
    throw numeric_error("moments: tempered-mean series did not converge");
}

// Shared engine behind analytic_mean / analytic_msd: the growth-factor
// series per family evaluated at exponent rate c.
double growth_factor(const Kernel& k, double c, double t,
                     const AccuracyBudget& budget) {
    if (t == 0.0) return 1.0;
    switch (k.family) {
    case KernelFamily::Standard:
        return std::exp(c * t);
    case KernelFamily::Subdiffusive:
        return ml1(k.alpha, c * std::pow(t, k.alpha), budget);
    case KernelFamily::Tempered: {
        const double a = k.alpha;
        const double ta = std::pow(t, a);
        auto f = [&](double v) {
            if (v <= 0.0) return c * rgamma(a); // k = 1 series term survives at v = 0
            return std::exp(-std::pow(v, 1.0 / a) / k.tau) * g_series(a, c, v, budget);
        };
        // absolute tolerance keyed to the integrand scale at the right end
        double scale = std::max(std::abs(f(ta)), std::abs(c));
        double integral = integrate(f, 0.0, ta, 1e-14 * std::max(1.0, scale * ta));
        return 1.0 + integral / a;
    }
    case KernelFamily::MixStandardSub:
    case KernelFamily::MixSubSub: {
        const bool gs = k.family == KernelFamily::MixStandardSub;
        const double a1 = k.alpha;
        const double a2 = gs ? 1.0 : k.alpha2;
        const double z2 = k.w2 * c * std::pow(t, a2);
        long double sum = 0.0L;
        double coef = 1.0; // (w1 c)^j t^{a1 j}
        const double step = k.w1 * c * std::pow(t, a1);
        int below = 0;
        for (int j = 0; j < budget.max_terms; ++j) {
            double term = coef * ml3(a2, a1 * j + 1.0, j + 1.0, z2, budget);
            sum += static_cast<long double>(term);
            if (std::abs(term) < budget.abs_tol) {
                if (++below >= 2) return static_cast<double>(sum);
            } else {
                below = 0;
            }
            coef *= step;
            if (std::isinf(coef))
                throw numeric_error("moments: mixture moment series overflow");
        }
        throw numeric_error("moments: mixture moment series did not converge");
    }
    }
    throw domain_error("moments: unknown kernel family");
}

struct EtaComponent {
    double coef; // mixture weight
    double a;    // power: coef * s^{a-1} e^{-s*inv_tau} / Gamma(a)
    double inv_tau;
};

int eta_components(const Kernel& k, EtaComponent out[2]) {
    switch (k.family) {
    case KernelFamily::Standard:
        out[0] = {1.0, 1.0, 0.0};
        return 1;
    case KernelFamily::Subdiffusive:
        out[0] = {1.0, k.alpha, 0.0};
        return 1;
    case KernelFamily::Tempered:
        out[0] = {1.0, k.alpha, 1.0 / k.tau};
        return 1;
    case KernelFamily::MixStandardSub:
        out[0] = {k.w1, k.alpha, 0.0};
        out[1] = {k.w2, 1.0, 0.0};
        return 2;
    case KernelFamily::MixSubSub:
        out[0] = {k.w1, k.alpha, 0.0};
        out[1] = {k.w2, k.alpha2, 0.0};
        return 2;
    }
    throw domain_error("moments: unknown kernel family");
}

} // namespace

double analytic_mean(const Kernel& k, const MarketParams& m, double t,
                     const AccuracyBudget& budget) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    return m.x0 * growth_factor(k, m.mu, t, budget);
}

double analytic_msd(const Kernel& k, const MarketParams& m, double t,
                    const AccuracyBudget& budget) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    return m.x0 * m.x0 * growth_factor(k, m.sigma2() + 2.0 * m.mu, t, budget);
}

double generic_moment(const Kernel& k, const MarketParams& m, int n, double t,
                      const InversionConfig& cfg) {
    k.require_valid();
    m.require_valid();
    cfg.require_valid();
    if (n < 0) throw domain_error("moments: moment order must be >= 0");
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    if (n == 0) return 1.0;
    double xn = std::pow(m.x0, n);
    if (t == 0.0) return xn;

    const double c = 0.5 * m.sigma2() * n * (n - 1.0) + m.mu * n;

    // locate the real pole s* with c * eta_hat(s*) = 1 (if any) and widen the
    // Talbot contour so its real-axis crossing stays to the right of it
    double scale = cfg.scale;
    if (c > 0.0) {
        auto eta_real = [&k](double s) {
            return eta_laplace(k, std::complex<double>(s, 0.0)).real();
        };
        double target = 1.0 / c;
        if (eta_real(1e-10) > target) {
            double hi = 1.0;
            while (eta_real(hi) > target) {
                hi *= 4.0;
                if (hi > 1e12)
                    throw numeric_error("moments: growth pole beyond invertible range");
            }
            double lo = hi > 1.0 ? hi / 4.0 : 1e-10;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                (eta_real(mid) > target ? lo : hi) = mid;
            }
            double s_star = 0.5 * (lo + hi);
            double needed = 1.2 * s_star * 5.0 * t / (2.0 * cfg.nodes);
            scale = cfg.scale * std::max(1.0, needed);
        }
    }

    auto F = [&k, c](std::complex<double> s) {
        return 1.0 / (s * (1.0 - c * eta_laplace(k, s)));
    };
    InversionConfig eff = cfg;
    eff.scale = scale;
    double v = lap_invert(F, t, eff);
    if (!std::isfinite(v) || v <= 0.0)
        throw numeric_error("moments: generic moment inversion failed (non-positive "
                            "or non-finite result)");
    return xn * v;
}

double log_mean(const Kernel& k, const MarketParams& m, double t) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    return std::log(m.x0) + m.mubar() * eta_integral(k, t);
}

double kernel_J(const Kernel& k, double t) {
    k.require_valid();
    if (t == 0.0) return 0.0;
    if (!(t > 0.0)) throw domain_error("moments: time must be >= 0");
    switch (k.family) {
    case KernelFamily::Standard:
        return 0.5 * t * t;
    case KernelFamily::Subdiffusive:
        return std::pow(t, 2.0 * k.alpha) * rgamma(2.0 * k.alpha + 1.0);
    case KernelFamily::Tempered:
        // L^{-1}{(s+1/tau)^{-2a}/s} = tau^{2a} P(2a, t/tau)
        return std::pow(k.tau, 2.0 * k.alpha) * gamma_p(2.0 * k.alpha, t / k.tau);
    case KernelFamily::MixStandardSub: {
        double a = k.alpha;
        return k.w1 * k.w1 * std::pow(t, 2.0 * a) * rgamma(2.0 * a + 1.0) +
               2.0 * k.w1 * k.w2 * std::pow(t, a + 1.0) * rgamma(a + 2.0) +
               k.w2 * k.w2 * 0.5 * t * t;
    }
    case KernelFamily::MixSubSub: {
        double a1 = k.alpha, a2 = k.alpha2;
        return k.w1 * k.w1 * std::pow(t, 2.0 * a1) * rgamma(2.0 * a1 + 1.0) +
               2.0 * k.w1 * k.w2 * std::pow(t, a1 + a2) * rgamma(a1 + a2 + 1.0) +
               k.w2 * k.w2 * std::pow(t, 2.0 * a2) * rgamma(2.0 * a2 + 1.0);
    }
    }
    throw domain_error("moments: unknown kernel family");
}

double kernel_J_quadrature(const Kernel& k, double t) {
    k.require_valid();
    if (t == 0.0) return 0.0;
    if (!(t > 0.0)) throw domain_error("moments: time must be >= 0");
    // J(t) = int_0^t eta(s) I(t-s) ds; each eta component
    // coef s^{a-1} e^{-s/tau} / Gamma(a) is regularized by v = s^a.
    EtaComponent comp[2];
    int nc = eta_components(k, comp);
    double total = 0.0;
    const double It = eta_integral(k, t);
    for (int i = 0; i < nc; ++i) {
        const EtaComponent& ec = comp[i];
        double ta = std::pow(t, ec.a);
        auto f = [&](double v) {
            double s = std::pow(v, 1.0 / ec.a);
            if (s > t) s = t; // clamp roundoff at the endpoint
            return std::exp(-s * ec.inv_tau) * eta_integral(k, t - s);
        };
        double integral = integrate(f, 0.0, ta, 1e-14 * std::max(1.0, ta * It));
        total += ec.coef * rgamma(ec.a) / ec.a * integral;
    }
    return total;
}

double log_variance(const Kernel& k, const MarketParams& m, double t) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    double I = eta_integral(k, t);
    double mb = m.mubar();
    return m.sigma2() * I + mb * mb * (2.0 * kernel_J(k, t) - I * I);
}

double log_variance_quadrature(const Kernel& k, const MarketParams& m, double t) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    double I = eta_integral(k, t);
    double mb = m.mubar();
    return m.sigma2() * I + mb * mb * (2.0 * kernel_J_quadrature(k, t) - I * I);
}

double periodic_log_return(const Kernel& k, const MarketParams& m, double t,
                           double dt) {
    k.require_valid();
    m.require_valid();
    if (t < 0.0) throw domain_error("moments: time must be >= 0");
    if (!(dt > 0.0)) throw domain_error("moments: period dt must be > 0");
    return m.mubar() * (eta_integral(k, t + dt) - eta_integral(k, t)) / dt;
}

double log_return_rate(const Kernel& k, const MarketParams& m, double t) {
    k.require_valid();
    m.require_valid();
    return m.mubar() * eta_time(k, t);
}

} // namespace ggbm
