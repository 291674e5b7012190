#include "ggbm/pricing.hpp"

#include "ggbm/parallel.hpp"
#include "ggbm/rng.hpp"
#include "ggbm/simulate.hpp"
#include "ggbm/specfun.hpp"

#include <cmath>
#include <vector>

namespace ggbm {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;

double effective_rate(const MarketParams& m, RateMode mode) {
    return mode == RateMode::RiskNeutral ? m.r : m.mubar();
}

// weight applied to the conditional closed-form price inside the mixture
double discount_weight(double u, double T, double re, Discounting disc) {
    return disc == Discounting::Operational ? 1.0 : std::exp(re * (u - T));
}

void check_grid_match(const DensityGrid* grid, double T) {
    if (!grid) return;
    if (std::abs(grid->t - T) > 1e-9 * std::max(1.0, std::abs(T)))
        throw domain_error("pricing: density grid maturity does not match the option");
}

// trapezoid of g(u) h(u) du over the grid plus tail mass times g(u_max)
template <typename G>
double mix_over_grid(const DensityGrid& grid, const G& g) {
    double acc = 0.0;
    double prev = g(grid.u[0]) * grid.h[0];
    for (std::size_t i = 1; i < grid.u.size(); ++i) {
        double cur = g(grid.u[i]) * grid.h[i];
        acc += 0.5 * (grid.u[i] - grid.u[i - 1]) * (prev + cur);
        prev = cur;
    }
    double residual = 1.0 - grid.mass();
    if (residual > 0.0) acc += residual * g(grid.u.back());
    return acc;
}

double lognormal_pdf(const MarketParams& m, double x, double u) {
    if (!(u > 0.0)) return 0.0;
    double lr = std::log(x / m.x0);
    double s2u = m.sigma2() * u;
    double d = lr - m.mubar() * u;
    return std::exp(-d * d / (2.0 * s2u)) / (x * std::sqrt(s2u) * kSqrt2Pi);
}

} // namespace

double bs_call(const MarketParams& m, double strike, double u, RateMode mode) {
    m.require_valid();
    if (!(strike > 0.0)) throw domain_error("pricing: strike must be > 0");
    if (u <= 0.0) return std::max(m.x0 - strike, 0.0);
    double re = effective_rate(m, mode);
    double sv = m.sigma * std::sqrt(u);
    double disc = std::exp(-re * u);
    if (sv < 1e-12) return std::max(m.x0 - strike * disc, 0.0);
    double d1 = (std::log(m.x0 / strike) + (re + 0.5 * m.sigma2()) * u) / sv;
    double d2 = d1 - sv;
    return m.x0 * std_normal_cdf(d1) - strike * disc * std_normal_cdf(d2);
}

double bs_put(const MarketParams& m, double strike, double u, RateMode mode) {
    m.require_valid();
    if (!(strike > 0.0)) throw domain_error("pricing: strike must be > 0");
    if (u <= 0.0) return std::max(strike - m.x0, 0.0);
    double re = effective_rate(m, mode);
    double sv = m.sigma * std::sqrt(u);
    double disc = std::exp(-re * u);
    if (sv < 1e-12) return std::max(strike * disc - m.x0, 0.0);
    double d1 = (std::log(m.x0 / strike) + (re + 0.5 * m.sigma2()) * u) / sv;
    double d2 = d1 - sv;
    return strike * disc * std_normal_cdf(-d2) - m.x0 * std_normal_cdf(-d1);
}

namespace {

template <typename Payoff>
double gbs_price(const Kernel& k, const MarketParams& m, double strike, double T,
                 const PricingOptions& opts, const DensityGrid* grid,
                 const Payoff& closed_form) {
    k.require_valid();
    m.require_valid();
    if (!(strike > 0.0)) throw domain_error("pricing: strike must be > 0");
    if (!(T > 0.0)) throw domain_error("pricing: maturity must be > 0");
    if (k.family == KernelFamily::Standard)
        return closed_form(m, strike, T, opts.mode);
    check_grid_match(grid, T);
    DensityGrid local;
    if (!grid) {
        local = density_grid(k, T, opts.grid_n);
        grid = &local;
    }
    double re = effective_rate(m, opts.mode);
    auto g = [&](double u) {
        return discount_weight(u, T, re, opts.discounting) *
               closed_form(m, strike, u, opts.mode);
    };
    return mix_over_grid(*grid, g);
}

} // namespace

double gbs_call(const Kernel& k, const MarketParams& m, double strike, double T,
                const PricingOptions& opts, const DensityGrid* grid) {
    return gbs_price(k, m, strike, T, opts, grid,
                     [](const MarketParams& mm, double kk, double uu, RateMode mo) {
                         return bs_call(mm, kk, uu, mo);
                     });
}

double gbs_put(const Kernel& k, const MarketParams& m, double strike, double T,
               const PricingOptions& opts, const DensityGrid* grid) {
    return gbs_price(k, m, strike, T, opts, grid,
                     [](const MarketParams& mm, double kk, double uu, RateMode mo) {
                         return bs_put(mm, kk, uu, mo);
                     });
}

McPrice gbs_call_mc(const Kernel& k, const MarketParams& m, double strike, double T,
                    std::size_t n_draws, std::uint64_t seed,
                    const PricingOptions& opts, const DensityGrid* grid) {
    k.require_valid();
    m.require_valid();
    if (!(strike > 0.0)) throw domain_error("pricing: strike must be > 0");
    if (!(T > 0.0)) throw domain_error("pricing: maturity must be > 0");
    if (n_draws == 0) throw domain_error("pricing: need at least one draw");

    if (k.family == KernelFamily::Standard)
        return McPrice{bs_call(m, strike, T, opts.mode), 0.0};

    check_grid_match(grid, T);
    DensityGrid local;
    const bool exact_stable = k.family == KernelFamily::Subdiffusive;
    if (!grid && !exact_stable) {
        local = density_grid(k, T, opts.grid_n);
        grid = &local;
    }
    double re = effective_rate(m, opts.mode);
    Rng rng = Rng::for_path(seed, 0);
    std::vector<double> y(n_draws);
    for (std::size_t i = 0; i < n_draws; ++i) {
        double u;
        if (exact_stable) {
            // S(T) equals (T/X)^alpha in law, X standard one-sided stable
            double xdraw = sample_stable_increment(k.alpha, 1.0, rng);
            u = std::pow(T / xdraw, k.alpha);
        } else {
            u = grid->quantile(rng.uniform01());
        }
        y[i] = discount_weight(u, T, re, opts.discounting) *
               bs_call(m, strike, u, opts.mode);
    }
    double n = static_cast<double>(n_draws);
    double mean = pairwise_sum(y.data(), n_draws) / n;
    double se = 0.0;
    if (n_draws > 1) {
        for (std::size_t i = 0; i < n_draws; ++i) {
            double d = y[i] - mean;
            y[i] = d * d;
        }
        double var = pairwise_sum(y.data(), n_draws) / (n - 1.0);
        se = std::sqrt(std::max(var, 0.0) / n);
    }
    return McPrice{mean, se};
}

std::vector<double> price_curve(const Kernel& k, const MarketParams& m,
                                const std::vector<double>& strikes, double T,
                                const PricingOptions& opts) {
    k.require_valid();
    m.require_valid();
    if (strikes.empty()) throw domain_error("pricing: empty strike list");
    std::vector<double> out;
    out.reserve(strikes.size());
    if (k.family == KernelFamily::Standard) {
        for (double strike : strikes) out.push_back(bs_call(m, strike, T, opts.mode));
        return out;
    }
    DensityGrid grid = density_grid(k, T, opts.grid_n);
    for (double strike : strikes)
        out.push_back(gbs_call(k, m, strike, T, opts, &grid));
    return out;
}

double mixture_discount_factor(const Kernel& k, const MarketParams& m, double T,
                               const PricingOptions& opts, const DensityGrid* grid) {
    k.require_valid();
    m.require_valid();
    if (!(T > 0.0)) throw domain_error("pricing: maturity must be > 0");
    double re = effective_rate(m, opts.mode);
    if (opts.discounting == Discounting::Physical ||
        k.family == KernelFamily::Standard)
        return std::exp(-re * T);
    check_grid_match(grid, T);
    DensityGrid local;
    if (!grid) {
        local = density_grid(k, T, opts.grid_n);
        grid = &local;
    }
    return mix_over_grid(*grid, [re](double u) { return std::exp(-re * u); });
}

double price_pdf(const Kernel& k, const MarketParams& m, double x, double t,
                 PdfRoute route, const PricingOptions& opts,
                 const DensityGrid* grid) {
    k.require_valid();
    m.require_valid();
    if (!(x > 0.0)) throw domain_error("pricing: price density requires x > 0");
    if (!(t > 0.0)) throw domain_error("pricing: price density requires t > 0");

    if (k.family == KernelFamily::Standard) return lognormal_pdf(m, x, t);

    const double mubar = m.mubar();
    const double s2 = m.sigma2();
    const double lr = std::log(x / m.x0);

    if (route == PdfRoute::Quadrature) {
        check_grid_match(grid, t);
        DensityGrid local;
        if (!grid) {
            local = density_grid(k, t, opts.grid_n);
            grid = &local;
        }
        const auto& gu = grid->u;
        const auto& gh = grid->h;
        const std::size_t n = gu.size();
        const double du = gu[1] - gu[0];
        // The conditional density carries a u^{-1/2} factor, so near u = 0
        // (and across the e^{-lr^2/(2 s2 u)} knee when x is close to x0) the
        // plain trapezoid on the grid cannot resolve the integrand. Integrate
        // [0, u_J] after the substitution u = v^2 — which removes the
        // singularity exactly — with h interpolated linearly between grid
        // points; the trapezoid covers the smooth remainder.
        const double c = lr * lr / (2.0 * s2);
        const double b = mubar * mubar / (2.0 * s2);
        const double K = std::exp(lr * mubar / s2) / (x * std::sqrt(s2) * kSqrt2Pi);
        double uj_target = std::max(16.0 * du, 2.0 * c);
        std::size_t J = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(uj_target / du)));
        J = std::min(J, std::max<std::size_t>(1, (n - 1) / 4));
        auto h_lin = [&](double u) {
            double p = u / du;
            std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(p), J - 1);
            double w = p - static_cast<double>(i);
            return gh[i] * (1.0 - w) + gh[i + 1] * w;
        };
        auto fv = [&](double v) {
            if (v <= 0.0) return c > 0.0 ? 0.0 : 2.0 * gh[0] * K;
            double u = v * v;
            double e = -c / u - b * u;
            if (e < -700.0) return 0.0;
            return 2.0 * h_lin(u) * K * std::exp(e);
        };
        const int nv = 2048;
        const double vJ = std::sqrt(gu[J]);
        double acc = fv(0.0) + fv(vJ);
        for (int i = 1; i < nv; ++i)
            acc += fv(vJ * i / nv) * (i % 2 ? 4.0 : 2.0);
        double val = acc * vJ / (3.0 * nv);
        double prev = lognormal_pdf(m, x, gu[J]) * gh[J];
        for (std::size_t i = J + 1; i < n; ++i) {
            double cur = lognormal_pdf(m, x, gu[i]) * gh[i];
            val += 0.5 * (gu[i] - gu[i - 1]) * (prev + cur);
            prev = cur;
        }
        double residual = 1.0 - grid->mass();
        if (residual > 0.0) val += residual * lognormal_pdf(m, x, gu.back());
        return val;
    }

    // Direct route: Talbot inversion in t of
    //   Psi(s)/s * exp(-|lr| (sqrt(mubar^2 + 2 s2 Psi) -+ mubar)/s2)
    //           / (x sqrt(mubar^2 + 2 s2 Psi))
    auto logF = [&](std::complex<double> s) {
        std::complex<double> psi = levy_exponent(k, s);
        std::complex<double> W = mubar * mubar + 2.0 * s2 * psi;
        std::complex<double> sq = std::sqrt(W);
        std::complex<double> expo =
            lr > 0.0 ? -lr * (sq - mubar) / s2 : lr * (sq + mubar) / s2;
        return std::log(psi) - std::log(s) - std::log(x) - 0.5 * std::log(W) + expo;
    };
    InversionConfig cfg = opts.inversion;
    // A below-floor value means the density is smaller than the Talbot
    // roundoff floor ~e^{2 nodes scale / 5} eps; retry with a SMALLER scale,
    // which lowers the floor (larger scales only amplify it).
    const double ladder[3] = {1.0, 0.5, 0.25};
    double value = 0.0;
    double last_floor = 0.0;
    for (double mult : ladder) {
        cfg.scale = opts.inversion.scale * mult;
        LogInversion res = lap_invert_log(logF, t, cfg);
        last_floor = res.noise_floor;
        if (std::abs(res.value) > res.noise_floor) {
            value = res.value;
            break;
        }
        value = 0.0;
    }
    if (value < -(1e-9 + 10.0 * last_floor))
        throw numeric_error("pricing: price density inverted to a large negative "
                            "value; inversion failed");
    return value;
}

PricePdfSlice price_pdf_slice(const Kernel& k, const MarketParams& m,
                              const std::vector<double>& xs, double t,
                              PdfRoute route, const PricingOptions& opts) {
    if (xs.empty()) throw domain_error("pricing: empty abscissa list");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw domain_error("pricing: abscissas must be strictly ascending");
    PricePdfSlice slice;
    slice.t = t;
    slice.x0 = m.x0;
    slice.mu = m.mu;
    slice.sigma = m.sigma;
    slice.x = xs;
    slice.p.reserve(xs.size());
    DensityGrid grid;
    const DensityGrid* gp = nullptr;
    if (route == PdfRoute::Quadrature && k.family != KernelFamily::Standard) {
        grid = density_grid(k, t, opts.grid_n);
        gp = &grid;
    }
    for (double x : xs) slice.p.push_back(price_pdf(k, m, x, t, route, opts, gp));
    return slice;
}

} // namespace ggbm
