#include "ggbm/specfun.hpp"

#include <cmath>
#include <limits>

namespace ggbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sin(pi*x) with argument reduction so accuracy does not degrade for large x.
double sin_pi(double x) {
    double k = std::floor(x);
    double r = x - k;
    double s;
    if (r <= 0.5)
        s = std::sin(kPi * r);
    else
        s = std::sin(kPi * (1.0 - r));
    return (static_cast<long long>(k) % 2 != 0) ? -s : s;
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos (g = 7, 9 coefficients), relative accuracy ~1e-14 on the positive axis.
double lanczos_log_gamma(double x) {
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    double a = c[0];
    double t = x + 6.5; // x + g - 0.5 with the series written for Gamma(x)
    for (int i = 1; i < 9; ++i) a += c[i] / (x + i - 1.0);
    return 0.918938533204672741780329736406 /* log(sqrt(2 pi)) */
           + (x - 0.5) * std::log(t) - t + std::log(a);
}

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("specfun: log_gamma requires x > 0");
    if (x < 0.5) {
        // reflection through Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(kPi / sin_pi(x)) - lanczos_log_gamma(1.0 - x);
    }
    return lanczos_log_gamma(x);
}

double gamma_fn(double x) {
    if (std::isnan(x)) return x;
    if (x > 0.0) {
        if (x > 171.7) return kInf; // overflow threshold for double
        return std::exp(log_gamma(x));
    }
    if (is_nonpositive_integer(x)) return kInf; // pole (sign ambiguous)
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    return kPi / (sin_pi(x) * std::exp(lanczos_log_gamma(1.0 - x)));
}

double rgamma(double x) {
    if (std::isnan(x)) return x;
    if (x > 0.0) {
        if (x > 171.7) return 0.0; // 1/Gamma underflows
        return std::exp(-log_gamma(x));
    }
    if (is_nonpositive_integer(x)) return 0.0;
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    double lg = lanczos_log_gamma(1.0 - x);
    if (lg > 709.0) return std::copysign(kInf, sin_pi(x)); // |x| enormous
    return sin_pi(x) * std::exp(lg) / kPi;
}

namespace {

// Shared two-parameter Mittag-Leffler core. ml1 = beta 1.
double ml2_impl(double alpha, double beta, double z, const AccuracyBudget& budget) {
    budget.validate();
    if (!(alpha > 0.0) || alpha > 2.0)
        throw domain_error("specfun: ml requires alpha in (0, 2]");
    if (!std::isfinite(z) || !std::isfinite(beta))
        throw domain_error("specfun: ml requires finite arguments");

    // Asymptotic branch for large positive z:
    //   E_{a,b}(z) ~ (1/a) z^{(1-b)/a} exp(z^{1/a}) - sum_{k>=1} z^{-k}/Gamma(b-a k)
    auto asymptotic = [&](double zz) -> double {
        double expo = std::pow(zz, 1.0 / alpha);
        if (expo > 708.0) return kInf; // genuinely above double range
        double lead = (1.0 / alpha) * std::pow(zz, (1.0 - beta) / alpha) * std::exp(expo);
        double corr = 0.0;
        double zk = 1.0;
        double prev = kInf;
        for (int k = 1; k <= 12; ++k) {
            zk /= zz;
            double term = zk * rgamma(beta - alpha * k);
            if (std::abs(term) > prev) break; // asymptotic tail started growing
            corr += term;
            prev = std::abs(term);
        }
        return lead - corr;
    };

    if (z > budget.z_switch) {
        // Positive z beyond the fast-path window. For beta > 0 every Taylor
        // term shares one sign, so the series stays stable arbitrarily far
        // out -- but z^k and 1/Gamma(alpha k + beta) overflow/underflow
        // separately long before the terms do, so the sum is taken in the
        // log domain around its peak. The exponential asymptotic form takes
        // over only when the series cannot converge within the term budget;
        // there exp(z^{1/alpha}) dominates so strongly that the truncated
        // algebraic correction is relatively negligible. (Handing off any
        // earlier is visibly wrong: the correction series bottoms out near
        // 1e-6 at z ~ 5 for non-integer beta.)
        if (beta > 0.0) {
            const double lnz = std::log(z);
            double peak = -kInf;
            int last = -1;
            for (int k = 0; k < budget.max_terms; ++k) {
                double lt = k * lnz - std::lgamma(alpha * k + beta);
                if (lt > peak)
                    peak = lt;
                else if (lt < peak - 50.0) { // terms below ~2e-22 of the peak
                    last = k;
                    break;
                }
            }
            if (last > 0) {
                long double sum = 0.0L;
                for (int k = 0; k <= last; ++k) {
                    double lt = k * lnz - std::lgamma(alpha * k + beta);
                    sum += std::exp(static_cast<long double>(lt - peak));
                }
                double ln_value =
                    peak + static_cast<double>(std::log(sum));
                if (ln_value > 709.0) return kInf;
                return std::exp(ln_value);
            }
        }
        return asymptotic(z);
    }

    // Taylor series sum_k z^k / Gamma(alpha k + beta), long double accumulation.
    long double sum = 0.0L;
    double zpow = 1.0;
    int below = 0;
    bool converged = false;
    for (int k = 0; k < budget.max_terms; ++k) {
        double term = zpow * rgamma(alpha * k + beta);
        sum += static_cast<long double>(term);
        if (std::abs(term) < budget.abs_tol) {
            if (++below >= 2 && k >= 2) {
                converged = true;
                break;
            }
        } else {
            below = 0;
        }
        zpow *= z;
        if (std::isinf(zpow))
            return z > 0 ? kInf : throw numeric_error("specfun: ml series overflow");
    }
    if (!converged) {
        if (z > 0.0) return asymptotic(z); // graceful fallback near the switch
        throw numeric_error("specfun: ml series did not converge within max_terms");
    }
    return static_cast<double>(sum);
}

} // namespace

double ml1(double alpha, double z, const AccuracyBudget& budget) {
    return ml2_impl(alpha, 1.0, z, budget);
}

double ml2(double alpha, double beta, double z, const AccuracyBudget& budget) {
    return ml2_impl(alpha, beta, z, budget);
}

double ml3(double alpha, double beta, double gamma, double z,
           const AccuracyBudget& budget) {
    budget.validate();
    if (!(alpha > 0.0)) throw domain_error("specfun: ml3 requires alpha > 0");
    if (!std::isfinite(z) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw domain_error("specfun: ml3 requires finite arguments");

    // sum_n (gamma)_n z^n / (Gamma(alpha n + beta) n!) with
    // coef_{n+1} = coef_n (gamma + n) z / (n + 1).
    long double sum = 0.0L;
    double coef = 1.0;
    int below = 0;
    for (int n = 0; n < budget.max_terms; ++n) {
        double term = coef * rgamma(alpha * n + beta);
        sum += static_cast<long double>(term);
        if (std::abs(term) < budget.abs_tol) {
            if (++below >= 2 && n >= 2) return static_cast<double>(sum);
        } else {
            below = 0;
        }
        coef *= (gamma + n) * z / (n + 1.0);
        if (std::isinf(coef))
            throw numeric_error("specfun: ml3 series overflow");
    }
    throw numeric_error("specfun: ml3 series did not converge within max_terms");
}

double kummer_1f1(double a, double b, double z, const AccuracyBudget& budget) {
    budget.validate();
    if (is_nonpositive_integer(b))
        throw domain_error("specfun: 1F1 pole — b must not be a non-positive integer");
    if (!std::isfinite(a) || !std::isfinite(z))
        throw domain_error("specfun: 1F1 requires finite arguments");

    long double sum = 0.0L;
    double term = 1.0;
    int below = 0;
    for (int k = 0; k < budget.max_terms; ++k) {
        sum += static_cast<long double>(term);
        if (std::abs(term) < budget.abs_tol) {
            if (++below >= 2 && k >= 2) return static_cast<double>(sum);
        } else {
            below = 0;
        }
        term *= (a + k) * z / ((b + k) * (k + 1.0));
        if (std::isinf(term))
            throw numeric_error("specfun: 1F1 series overflow");
    }
    throw numeric_error("specfun: 1F1 series did not converge within max_terms");
}

double lower_incomplete_gamma(double a, double z) {
    if (!(a > 0.0)) throw domain_error("specfun: incomplete gamma requires a > 0");
    if (!(z >= 0.0)) throw domain_error("specfun: incomplete gamma requires z >= 0");
    if (z == 0.0) return 0.0;

    double lg = log_gamma(a);
    if (z < a + 1.0) {
        // series for P(a,z): gamma(a,z) = e^{-z} z^a sum_n z^n / (a (a+1)...(a+n))
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= z / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16)
                return sum * std::exp(-z + a * std::log(z));
        }
        throw numeric_error("specfun: incomplete gamma series did not converge");
    }
    // Lentz continued fraction for Q(a,z) = Gamma(a,z)/Gamma(a)
    const double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            double q = std::exp(-z + a * std::log(z) - lg) * h;
            return std::exp(lg) * (1.0 - q);
        }
    }
    throw numeric_error("specfun: incomplete gamma continued fraction did not converge");
}

double gamma_p(double a, double z) {
    return lower_incomplete_gamma(a, z) * rgamma(a);
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008443621048490393);
}

// ---------------------------------------------------------------------------
// One-sided alpha-stable density, E[e^{-sX}] = e^{-s^alpha}, 0 < alpha < 1.
//
// Two complementary evaluations:
//  (1) the convergent descending-power series
//        f(x) = (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(k a + 1)/k! sin(k pi a) x^{-k a - 1},
//      used where its envelope converges without catastrophic cancellation;
//  (2) an integral representation
//        f(x) = a/((1-a) pi) x^{-1/(1-a)} int_0^pi A(th) e^{-x^{-a/(1-a)} A(th)} d th,
//        ln A = [a ln sin(a th) + (1-a) ln sin((1-a) th) - ln sin th]/(1-a),
//      with the integrand handled in log space. Because A is monotone
//      increasing, m(th) = ln A - x^{-a/(1-a)} A is unimodal; the integrand can
//      be an extremely narrow spike (width ~ (1-a)/|theta - pi| near a -> 1),
//      so integration is anchored at the peak: ternary-search the maximum,
//      bisect outward for the m = M-2 core and the m = M-45 support edges,
//      then integrate core and the two monotone shoulders separately.
// ---------------------------------------------------------------------------

namespace {

double ln_A(double alpha, double th) {
    return (alpha * std::log(std::sin(alpha * th)) +
            (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * th)) -
            std::log(std::sin(th))) /
           (1.0 - alpha);
}

// Simple recursive adaptive Simpson with absolute tolerance.
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double mid, double fm,
                            double b, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
    double flm = f(lm), frm = f(rm);
    double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) < 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, lm, flm, mid, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, mid, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 28) {
    if (!(b > a)) return 0.0;
    double mid = 0.5 * (a + b);
    double fa = f(a), fm = f(mid), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, fa, mid, fm, b, fb, whole, tol, depth);
}

// Series attempt; returns log f and success. Convergence is judged on the
// term envelope exp(le) alone — the sin(k pi a) factor passes through zeros
// for rational a and must not fake convergence — and the result is rejected
// when accumulated roundoff (envelope * eps) could pollute the sum.
bool stable_series_log(double alpha, double log_x, double* out) {
    long double sum = 0.0L;
    double env_max = 0.0;
    bool converged = false;
    for (int k = 1; k < 400; ++k) {
        double le = log_gamma(k * alpha + 1.0) - log_gamma(k + 1.0) -
                    (k * alpha + 1.0) * log_x;
        if (le > 640.0) return false;
        double env = std::exp(le);
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        sum += static_cast<long double>(sign * sin_pi(k * alpha) * env);
        if (env > env_max) env_max = env;
        if (k > 4 && env < 1e-17 * env_max) {
            converged = true;
            break;
        }
    }
    if (!converged) return false;
    double s = static_cast<double>(sum);
    if (env_max * 1e-16 > 1e-14 + 1e-10 * std::abs(s)) return false; // cancellation
    if (!(s > 0.0)) return false;
    *out = std::log(s / kPi);
    return true;
}

double stable_integral_log(double alpha, double log_x, double rel_tol) {
    const double ly = -alpha / (1.0 - alpha) * log_x;
    const double lpre = std::log(alpha / (1.0 - alpha)) - log_x / (1.0 - alpha) -
                        std::log(kPi);
    auto m = [&](double th) -> double {
        double B = ln_A(alpha, th);
        double e = B + ly;
        if (e > 700.0) return -kInf;
        if (e < -700.0) return B;
        return B - std::exp(e);
    };
    const double eps = 1e-13;
    double lo = eps, hi = kPi - eps;
    for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (m(m1) < m(m2))
            lo = m1;
        else
            hi = m2;
    }
    double th_star = 0.5 * (lo + hi);
    double M = m(th_star);
    if (!std::isfinite(M)) return -kInf;
    // Roundoff in B is amplified by exp(B + ly) ~ |M|, so the normalized
    // integrand carries absolute noise ~|M| * 1e-14; tolerances below that
    // floor would keep the adaptive subdivision from ever terminating.
    const double noise = (1.0 + std::abs(M)) * std::max(0.1 * rel_tol, 1e-14);

    // bisect from the peak toward `side` for the level m = M - drop
    auto cross = [&](double side, double drop) -> double {
        if (m(side) >= M - drop) return side;
        double a = th_star, b = side;
        for (int it = 0; it < 48; ++it) {
            double mid = 0.5 * (a + b);
            if (m(mid) >= M - drop)
                a = mid;
            else
                b = mid;
        }
        return a;
    };
    double cL = cross(eps, 2.0), cR = cross(kPi - eps, 2.0);
    double tL = cross(eps, 45.0), tR = cross(kPi - eps, 45.0);
    auto g = [&](double th) -> double {
        double v = m(th) - M;
        if (v < -745.0) return 0.0;
        if (v > 0.0) v = 0.0;
        return std::exp(v);
    };
    double core = adaptive_simpson(g, std::min(cL, cR), std::max(cL, cR),
                                   noise * std::max(std::abs(cR - cL), 1e-8));
    double shoulder_tol = 10.0 * noise * std::max(core, 1e-10);
    double val = core + adaptive_simpson(g, tL, cL, shoulder_tol) +
                 adaptive_simpson(g, cR, tR, shoulder_tol);
    if (!(val > 0.0)) return -kInf;
    return lpre + M + std::log(val);
}

} // namespace

double one_sided_stable_log_pdf(double alpha, double log_x, double rel_tol) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw domain_error("specfun: stable density requires alpha in (0, 1)");
    if (std::isnan(log_x)) throw domain_error("specfun: stable density at NaN");
    double out;
    if (stable_series_log(alpha, log_x, &out)) return out;
    return stable_integral_log(alpha, log_x, rel_tol);
}

double one_sided_stable_pdf(double alpha, double x) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw domain_error("specfun: stable density requires alpha in (0, 1)");
    if (!(x > 0.0)) return 0.0;
    double lf = one_sided_stable_log_pdf(alpha, std::log(x));
    return lf > -709.0 ? std::exp(lf) : 0.0;
}

} // namespace ggbm
