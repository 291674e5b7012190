#include "ggbm/lapinv.hpp"

#include "ggbm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ggbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct TalbotResult {
    double value;
    double noise_floor;
};

// Fixed-Talbot contour s(th) = r th (cot th + i), r = 2 nodes / (5 t) * scale.
// `logF` returns log of the transform; the exponent t*s + logF(s) is fused
// before exponentiation so transforms with huge dynamic range stay finite.
// The noise floor estimates roundoff left over from cancelling large terms.
TalbotResult talbot_log(const LaplaceFn& logF, double t, int nodes, double scale) {
    const double r = 2.0 * nodes / (5.0 * t) * scale;
    using cd = std::complex<double>;

    long double acc = 0.0L;
    long double mag = 0.0L;

    // th = 0 node: s = r, weight 1/2, purely real direction.
    {
        cd e = std::exp(cd(t * r, 0.0) + logF(cd(r, 0.0)));
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw numeric_error("lapinv: non-finite Talbot term at th = 0");
        acc += 0.5L * static_cast<long double>(e.real());
        mag += 0.5L * static_cast<long double>(std::abs(e));
    }
    for (int k = 1; k < nodes; ++k) {
        double th = k * kPi / nodes;
        double cot = std::cos(th) / std::sin(th);
        cd s(r * th * cot, r * th);
        double sigma = th + (th * cot - 1.0) * cot;
        cd e = std::exp(cd(t, 0.0) * s + logF(s));
        cd term = e * cd(1.0, sigma);
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
            throw numeric_error("lapinv: non-finite Talbot term");
        acc += static_cast<long double>(term.real());
        mag += static_cast<long double>(std::abs(term));
    }
    TalbotResult out;
    out.value = static_cast<double>(acc) * r / nodes;
    out.noise_floor = static_cast<double>(mag) * r / nodes * kEps * 4.0;
    return out;
}

// Recursive adaptive Simpson (absolute tolerance).
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

// Exact route for the tempered kernel, Psi(s) = (s + theta)^alpha with
// theta = 1/tau: by the Laplace shift rule T(u) has the exponentially tilted
// stable density e^{-theta x} g_u(x), g_u(x) = u^{-1/a} f_a(x u^{-1/a}), and
// h(u, t) = -d/du int_0^t e^{-theta x} g_u(x) dx. The derivative telescopes
// (d/dw [w f(w)] appears) and one integration by parts leaves
//   h(u, t) = e^{-theta t} h_stable(u, t)
//           + theta/(alpha u^{1 + 1/alpha}) int_0^t e^{-theta x} x f_a(x u^{-1/alpha}) dx,
// a sum of positive, uniformly double-precision-safe pieces — no contour
// blowup in the deep tail, unlike Talbot on e^{-u Psi(s)}.
double tempered_density(const Kernel& k, double u, double t) {
    const double a = k.alpha;
    const double theta = 1.0 / k.tau;
    if (u == 0.0) {
        // limits of the two pieces as u -> 0: the integral piece tends to
        // theta^alpha P(1-alpha, theta t) (damped power tail of f_alpha cut
        // at w = t u^{-1/alpha}, damping scale theta^{-1} u^{-1/alpha})
        return std::exp(-theta * t) * std::pow(t, -a) * rgamma(1.0 - a) +
               std::pow(theta, a) * gamma_p(1.0 - a, theta * t);
    }
    const double lu = std::log(u);
    double lf = one_sided_stable_log_pdf(a, std::log(t) - lu / a);
    double le = lf + std::log(t / a) - (1.0 / a + 1.0) * lu;
    double first = le > -709.0 ? std::exp(-theta * t + le) : 0.0;

    auto integrand = [&](double x) -> double {
        if (x <= 0.0) return 0.0;
        // relaxed inner precision: this value is consumed by a quadrature
        // whose own tolerance is far above 1e-10
        double lfx = one_sided_stable_log_pdf(a, std::log(x) - lu / a, 1e-10);
        double lterm = -theta * x + std::log(x) + lfx;
        return lterm > -709.0 ? std::exp(lterm) : 0.0;
    };
    // Pre-pass for the integrand's scale and support. Each evaluation may cost
    // a full stable-density integration, so the adaptive pass is clipped to
    // where the pre-pass found non-negligible mass (for u >> t the integrand
    // lives in a boundary layer at x = t and the rest of [0, t] is dead), and
    // its tolerance is kept relative to the sampled scale.
    double samp[33];
    samp[0] = 0.0;
    double scale = 0.0;
    for (int i = 1; i <= 32; ++i) {
        samp[i] = integrand(t * i / 32.0);
        scale = std::max(scale, samp[i]);
    }
    if (scale <= 0.0) return first;
    int ilo = 1;
    while (ilo < 32 && samp[ilo] <= scale * 1e-16) ++ilo;
    int ihi = 32;
    while (ihi > 1 && samp[ihi] <= scale * 1e-16) --ihi;
    double xlo = t * (ilo - 1) / 32.0;
    double xhi = t * std::min(ihi + 1, 32) / 32.0;
    double pre = theta / (a * std::exp((1.0 + 1.0 / a) * lu));
    // outer tolerance must sit above the inner 1e-10 noise or the adaptive
    // pass chases digits the integrand does not carry
    double integral = integrate(integrand, xlo, xhi, 3e-9 * scale * (xhi - xlo));
    return first + pre * integral;
}

// Gaver-Stehfest weights for even n; magnitudes grow ~10^{0.45 n/2}, so the
// noise floor scales accordingly. Double precision limits n to <= 18 or so.
std::vector<double> stehfest_weights(int n) {
    std::vector<long double> fact(static_cast<size_t>(2 * n + 1), 1.0L);
    for (int i = 1; i <= 2 * n; ++i) fact[i] = fact[i - 1] * i;
    std::vector<double> zeta(static_cast<size_t>(n + 1), 0.0);
    int half = n / 2;
    for (int k = 1; k <= n; ++k) {
        long double sum = 0.0L;
        int j0 = (k + 1) / 2;
        int j1 = std::min(k, half);
        for (int j = j0; j <= j1; ++j) {
            long double num = std::pow(static_cast<long double>(j), half) * fact[2 * j];
            long double den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] *
                              fact[2 * j - k];
            sum += num / den;
        }
        zeta[k] = static_cast<double>(((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum);
    }
    return zeta;
}

} // namespace

void InversionConfig::require_valid() const {
    if (method == InversionMethod::Talbot) {
        if (nodes < 16)
            throw domain_error("lapinv: Talbot inversion requires at least 16 nodes");
    } else {
        if (nodes < 4 || nodes > 20 || nodes % 2 != 0)
            throw domain_error(
                "lapinv: Gaver-Stehfest requires an even node count in [4, 20]");
    }
    if (!(scale > 0.0)) throw domain_error("lapinv: inversion scale must be > 0");
}

double lap_invert(const LaplaceFn& F, double t, const InversionConfig& cfg) {
    cfg.require_valid();
    if (!(t > 0.0)) throw domain_error("lapinv: inversion time must be > 0");
    if (cfg.method == InversionMethod::GaverStehfest) {
        auto zeta = stehfest_weights(cfg.nodes);
        const double ln2t = 0.6931471805599453094172321214581766 / t;
        long double acc = 0.0L;
        for (int k = 1; k <= cfg.nodes; ++k) {
            std::complex<double> fs = F(std::complex<double>(k * ln2t, 0.0));
            double v = fs.real();
            if (!std::isfinite(v))
                throw numeric_error("lapinv: non-finite transform value in Stehfest sum");
            acc += static_cast<long double>(zeta[k] * v);
        }
        double value = static_cast<double>(acc) * ln2t;
        if (!std::isfinite(value))
            throw numeric_error("lapinv: Stehfest sum overflowed");
        return value;
    }
    auto logF = [&F](std::complex<double> s) {
        std::complex<double> v = F(s);
        return std::log(v);
    };
    TalbotResult res = talbot_log(logF, t, cfg.nodes, cfg.scale);
    if (!std::isfinite(res.value))
        throw numeric_error("lapinv: Talbot sum overflowed");
    return res.value;
}

LogInversion lap_invert_log(const LaplaceFn& logF, double t,
                            const InversionConfig& cfg) {
    cfg.require_valid();
    if (!(t > 0.0)) throw domain_error("lapinv: inversion time must be > 0");
    if (cfg.method != InversionMethod::Talbot)
        throw domain_error("lapinv: log-space inversion is Talbot-only");
    TalbotResult res = talbot_log(logF, t, cfg.nodes, cfg.scale);
    return LogInversion{res.value, res.noise_floor};
}

double subordination_density(const Kernel& k, double u, double t) {
    k.require_valid();
    if (!(t > 0.0)) throw domain_error("lapinv: subordination density requires t > 0");
    if (u < 0.0) throw domain_error("lapinv: subordination density requires u >= 0");

    switch (k.family) {
    case KernelFamily::Standard:
        throw degenerate_density(
            "lapinv: standard kernel has a degenerate subordination density "
            "(point mass at u = t)");
    case KernelFamily::Subdiffusive: {
        // Scaling route through the one-sided stable density f_a:
        //   h(u, t) = f_a(t u^{-1/a}) (t/a) u^{-1/a - 1},
        // evaluated in log space; h(0, t) = t^{-a} / Gamma(1 - a).
        const double a = k.alpha;
        if (u == 0.0) return std::exp(-a * std::log(t)) * rgamma(1.0 - a);
        double lu = std::log(u);
        double lf = one_sided_stable_log_pdf(a, std::log(t) - lu / a);
        double le = lf + std::log(t / a) - (1.0 / a + 1.0) * lu;
        return le > -709.0 ? std::exp(le) : 0.0;
    }
    case KernelFamily::Tempered:
        return tempered_density(k, u, t);
    default:
        break;
    }

    // Mixture kernels: Talbot inversion of h^(u, s) = Psi(s)/s e^{-u Psi(s)}
    // with the exponent fused in log space. In the deep tail (u >> t) the
    // integrand grows like e^{+u |s|^a} along the contour and a fixed node
    // count cannot cancel it, so each value is cross-checked against a second
    // node count; disagreement at every contour scale means the true value is
    // below what the inversion can resolve there — returned as 0, which the
    // density-grid mass check downstream validates.
    auto logF = [&k, u](std::complex<double> s) {
        std::complex<double> psi = levy_exponent(k, s);
        return std::log(psi) - std::log(s) - u * psi;
    };
    const double scales[3] = {1.0, 1.5, 2.25};
    for (double scale : scales) {
        TalbotResult ra = talbot_log(logF, t, 64, scale);
        TalbotResult rb = talbot_log(logF, t, 48, scale);
        if (!std::isfinite(ra.value) || !std::isfinite(rb.value))
            throw numeric_error("lapinv: subordination density inversion overflowed");
        bool a_noise = std::abs(ra.value) <= ra.noise_floor;
        bool b_noise = std::abs(rb.value) <= rb.noise_floor;
        if (a_noise && b_noise) return 0.0;
        double agree_tol = 1e-6 * std::max(std::abs(ra.value), std::abs(rb.value)) +
                           2.0 * (ra.noise_floor + rb.noise_floor);
        if (std::abs(ra.value - rb.value) <= agree_tol) {
            if (a_noise) return 0.0;
            if (ra.value < -(1e-9 + 10.0 * ra.noise_floor))
                throw numeric_error("lapinv: subordination density inverted to a "
                                    "large negative value; inversion failed");
            return ra.value;
        }
    }
    return 0.0; // beyond the resolvable tail at every scale
}

double DensityGrid::quantile(double p) const {
    if (degenerate) return atom;
    if (u.empty()) throw grid_error("lapinv: quantile of an empty density grid");
    if (p <= 0.0) return 0.0;
    if (p >= cdf.back()) return u.back();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
    size_t i = static_cast<size_t>(it - cdf.begin());
    if (i == 0) return 0.0;
    double c0 = cdf[i - 1], c1 = cdf[i];
    if (!(c1 > c0)) return u[i];
    double w = (p - c0) / (c1 - c0);
    return u[i - 1] + w * (u[i] - u[i - 1]);
}

DensityGrid density_grid(const Kernel& k, double t, int n) {
    k.require_valid();
    if (!(t > 0.0)) throw domain_error("lapinv: density grid requires t > 0");
    if (n < 16) throw domain_error("lapinv: density grid requires at least 16 intervals");

    DensityGrid g;
    g.kernel = k;
    g.t = t;
    if (k.family == KernelFamily::Standard) {
        g.degenerate = true;
        g.atom = t;
        return g;
    }
    g.degenerate = false;
    g.atom = 0.0;

    double u_max = t;
    for (int iter = 0; iter <= 10; ++iter) {
        g.u.assign(static_cast<size_t>(n) + 1, 0.0);
        g.h.assign(static_cast<size_t>(n) + 1, 0.0);
        g.cdf.assign(static_cast<size_t>(n) + 1, 0.0);
        double du = u_max / n;
        for (int i = 0; i <= n; ++i) {
            g.u[static_cast<size_t>(i)] = i * du;
            g.h[static_cast<size_t>(i)] =
                subordination_density(k, g.u[static_cast<size_t>(i)], t);
        }
        for (int i = 1; i <= n; ++i)
            g.cdf[static_cast<size_t>(i)] =
                g.cdf[static_cast<size_t>(i - 1)] +
                0.5 * du * (g.h[static_cast<size_t>(i - 1)] + g.h[static_cast<size_t>(i)]);
        double mass = g.cdf.back();
        if (mass > 1.0 + 1e-4)
            throw grid_error("lapinv: density grid mass overshoots 1; inversion failed");
        if (1.0 - mass < 1e-4) return g;
        u_max *= 2.0;
        if (u_max / t > 1024.0)
            throw grid_error("lapinv: density grid failed to capture the mass within "
                             "the 2^10 t horizon");
    }
    throw grid_error("lapinv: density grid expansion did not terminate");
}

} // namespace ggbm
