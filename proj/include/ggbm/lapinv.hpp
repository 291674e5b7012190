#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "ggbm/kernels.hpp"

namespace ggbm {

enum class InversionMethod {
    Talbot,        // fixed Talbot contour; tolerates the s^alpha branch point
    GaverStehfest, // real-axis sampling; cheap independent cross-check
};

struct InversionConfig {
    InversionMethod method = InversionMethod::Talbot;
    int nodes = 32;     // Talbot: >= 16; GaverStehfest: even, typically 14
    double scale = 1.0; // contour scaling (Talbot only)

    void require_valid() const;
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;

// Numerical inverse Laplace transform of F at t > 0. F must be analytic in
// Re(s) > 0. Throws numeric_error if the contour evaluation produces
// non-finite values.
double lap_invert(const LaplaceFn& F, double t, const InversionConfig& cfg = {});

struct LogInversion {
    double value = 0.0;
    // Estimated roundoff floor: machine epsilon times the summed magnitude of
    // the contour terms. |value| at or below this level is indistinguishable
    // from 0; callers clip accordingly.
    double noise_floor = 0.0;
};

// Inversion taking log F(s) instead of F(s) (complex logarithm). The node
// weight exp(t*s) and F are fused into a single exponential, which keeps the
// evaluation finite when F underflows or overflows while t*s + log F(s) is
// moderate — the situation for subordination densities e^{-u Psi(s)} at
// large u. Talbot only.
LogInversion lap_invert_log(const LaplaceFn& logF, double t,
                            const InversionConfig& cfg = {});

// Subordination density h(u, t): the marginal density of the inverse
// subordinator S(t), obtained by inverting h_hat(u, s) = Psi(s)/s * e^{-u Psi(s)}.
//  - Standard kernel: the law is the point mass delta(u - t); pointwise
//    queries throw degenerate_density (density_grid returns the degenerate
//    marker instead).
//  - Subdiffusive kernel: exact scaling route through the one-sided stable
//    density, h(u,t) = f_alpha(t u^{-1/alpha}) (t/alpha) u^{-1/alpha-1}.
//  - Other kernels: Talbot inversion (64 nodes) with noise-floor clipping and
//    a small contour-scale retry ladder for far-tail u.
// Values within the numerical noise floor are clipped to 0; negative values
// beyond -(1e-9 + 10*floor) abort with numeric_error (admissibility).
double subordination_density(const Kernel& k, double u, double t);

// Tabulated h(., t) with trapezoid CDF. For the Standard kernel the grid is
// the degenerate marker (degenerate = true, atom = t, arrays empty).
struct DensityGrid {
    Kernel kernel;
    double t = 0.0;
    std::vector<double> u;   // ascending, u.front() = 0
    std::vector<double> h;   // density values, >= 0
    std::vector<double> cdf; // trapezoid cumulative, cdf.front() = 0
    bool degenerate = false;
    double atom = 0.0; // atom location when degenerate

    double mass() const { return degenerate ? 1.0 : (cdf.empty() ? 0.0 : cdf.back()); }
    // Inverse CDF by linear interpolation; p in [0, 1). Degenerate -> atom.
    double quantile(double p) const;
};

// Builds the grid on [0, u_max] with n intervals (n+1 points), expanding
// u_max by geometric doubling from t until the tail mass is < 1e-4, capped at
// 2^10 * t. Throws grid_error if the cap is hit first or the mass overshoots
// 1 + 1e-4.
DensityGrid density_grid(const Kernel& k, double t, int n = 800);

} // namespace ggbm
