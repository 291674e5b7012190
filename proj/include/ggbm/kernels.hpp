#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ggbm/errors.hpp"

namespace ggbm {

enum class KernelFamily {
    Standard,       // eta(t) = 1
    Subdiffusive,   // eta(t) = t^{alpha-1}/Gamma(alpha)
    Tempered,       // eta(t) = t^{alpha-1} e^{-t/tau}/Gamma(alpha)
    MixStandardSub, // w1 * subdiffusive(alpha) + w2 * standard
    MixSubSub,      // w1 * subdiffusive(alpha1) + w2 * subdiffusive(alpha2)
};

struct ValidationReport {
    bool pass = true;
    double min_h = 0.0; // smallest density value seen by the numerical probe
    std::vector<std::string> issues;
};

// Memory kernel eta(t): the single object defining the operational-time law.
// eta_hat(s) is its Laplace transform and Psi(s) = 1/eta_hat(s) the Laplace
// exponent of the underlying increasing process T(u); S(t) is the first
// passage of T over t and every density/pricing/moment routine in the library
// is parameterized by this struct.
struct Kernel {
    KernelFamily family = KernelFamily::Standard;
    double alpha = 1.0;  // Subdiffusive/Tempered/MixStandardSub exponent; MixSubSub: alpha1
    double alpha2 = 1.0; // MixSubSub second exponent (alpha < alpha2)
    double tau = 1.0;    // Tempered crossover time
    double w1 = 1.0;     // weight of the first (subdiffusive) component
    double w2 = 0.0;     // weight of the second component, w1 + w2 = 1

    static Kernel standard();
    static Kernel subdiffusive(double alpha);
    static Kernel tempered(double alpha, double tau);
    static Kernel mix_standard_sub(double alpha, double w1, double w2);
    static Kernel mix_sub_sub(double alpha1, double alpha2, double w1, double w2);

    // Checks the parameter invariants; throws domain_error on violation.
    // Factories call this, so a Kernel built through them is always valid.
    void require_valid() const;
};

// eta(t) for t > 0. Power-law families diverge at t=0: t <= 0 throws
// domain_error for them (Standard accepts any t and returns 1).
double eta_time(const Kernel& k, double t);

// I(t) = int_0^t eta, t >= 0, in closed form per family.
double eta_integral(const Kernel& k, double t);

// eta_hat(s) for complex s with Re(s) > 0 (principal-branch powers).
std::complex<double> eta_laplace(const Kernel& k, std::complex<double> s);

// Psi(s) = 1 / eta_hat(s).
std::complex<double> levy_exponent(const Kernel& k, std::complex<double> s);

// Parameter-invariant check plus a numerical admissibility probe: evaluates
// the subordination density h(u,t) on a coarse (u,t) grid and reports any
// value < -1e-6. Report-valued; never throws for bad parameters.
ValidationReport validate(const Kernel& k);

// CLI/config syntax:
//   standard
//   sub:alpha=0.8
//   tempered:alpha=0.8,tau=2
//   mix-gs:alpha=0.8,w1=0.5        (w2 = 1 - w1)
//   mix-ss:alpha1=0.6,alpha2=0.8,w1=0.5
Kernel parse_kernel(const std::string& spec);
std::string to_string(const Kernel& k);

} // namespace ggbm
