#include "ggbm/kernels.hpp"

#include "ggbm/errors.hpp"
#include "ggbm/lapinv.hpp"
#include "ggbm/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ggbm {

namespace {

constexpr double kWeightTol = 1e-12;

void check_alpha_open(double a, const char* what) {
    if (!(a > 0.0) || !(a < 1.0)) {
        std::ostringstream os;
        os << "kernels: " << what << " requires alpha in (0,1), got " << a;
        throw domain_error(os.str());
    }
}

} // namespace

Kernel Kernel::standard() {
    Kernel k;
    k.family = KernelFamily::Standard;
    return k;
}

Kernel Kernel::subdiffusive(double alpha) {
    Kernel k;
    k.family = KernelFamily::Subdiffusive;
    k.alpha = alpha;
    k.require_valid();
    return k;
}

Kernel Kernel::tempered(double alpha, double tau) {
    Kernel k;
    k.family = KernelFamily::Tempered;
    k.alpha = alpha;
    k.tau = tau;
    k.require_valid();
    return k;
}

Kernel Kernel::mix_standard_sub(double alpha, double w1, double w2) {
    Kernel k;
    k.family = KernelFamily::MixStandardSub;
    k.alpha = alpha;
    k.w1 = w1;
    k.w2 = w2;
    k.require_valid();
    return k;
}

Kernel Kernel::mix_sub_sub(double alpha1, double alpha2, double w1, double w2) {
    Kernel k;
    k.family = KernelFamily::MixSubSub;
    k.alpha = alpha1;
    k.alpha2 = alpha2;
    k.w1 = w1;
    k.w2 = w2;
    k.require_valid();
    return k;
}

void Kernel::require_valid() const {
    switch (family) {
    case KernelFamily::Standard:
        return;
    case KernelFamily::Subdiffusive:
        check_alpha_open(alpha, "subdiffusive kernel");
        return;
    case KernelFamily::Tempered:
        check_alpha_open(alpha, "tempered kernel");
        if (!(tau > 0.0))
            throw domain_error("kernels: tempered kernel requires tau > 0");
        return;
    case KernelFamily::MixStandardSub:
        check_alpha_open(alpha, "mixed standard/subdiffusive kernel");
        break;
    case KernelFamily::MixSubSub:
        check_alpha_open(alpha, "mixed subdiffusive kernel (alpha1)");
        check_alpha_open(alpha2, "mixed subdiffusive kernel (alpha2)");
        if (!(alpha < alpha2))
            throw domain_error("kernels: mixed subdiffusive kernel requires alpha1 < alpha2");
        break;
    }
    if (!(w1 >= 0.0) || !(w2 >= 0.0))
        throw domain_error("kernels: mixture weights must be non-negative");
    if (std::abs(w1 + w2 - 1.0) > kWeightTol)
        throw domain_error("kernels: mixture weights must satisfy w1 + w2 = 1");
}

double eta_time(const Kernel& k, double t) {
    if (k.family == KernelFamily::Standard) return 1.0; // constant: any t
    if (!(t > 0.0)) throw domain_error("kernels: eta_time requires t > 0");
    switch (k.family) {
    case KernelFamily::Standard:
        return 1.0;
    case KernelFamily::Subdiffusive:
        return std::pow(t, k.alpha - 1.0) * rgamma(k.alpha);
    case KernelFamily::Tempered:
        return std::pow(t, k.alpha - 1.0) * std::exp(-t / k.tau) * rgamma(k.alpha);
    case KernelFamily::MixStandardSub:
        return k.w1 * std::pow(t, k.alpha - 1.0) * rgamma(k.alpha) + k.w2;
    case KernelFamily::MixSubSub:
        return k.w1 * std::pow(t, k.alpha - 1.0) * rgamma(k.alpha) +
               k.w2 * std::pow(t, k.alpha2 - 1.0) * rgamma(k.alpha2);
    }
    throw domain_error("kernels: unknown family");
}

double eta_integral(const Kernel& k, double t) {
    if (t == 0.0) return 0.0;
    if (!(t > 0.0)) throw domain_error("kernels: eta_integral requires t >= 0");
    switch (k.family) {
    case KernelFamily::Standard:
        return t;
    case KernelFamily::Subdiffusive:
        return std::pow(t, k.alpha) * rgamma(1.0 + k.alpha);
    case KernelFamily::Tempered:
        // int_0^t s^{a-1} e^{-s/tau} ds / Gamma(a) = tau^a P(a, t/tau)
        return std::pow(k.tau, k.alpha) * gamma_p(k.alpha, t / k.tau);
    case KernelFamily::MixStandardSub:
        return k.w1 * std::pow(t, k.alpha) * rgamma(1.0 + k.alpha) + k.w2 * t;
    case KernelFamily::MixSubSub:
        return k.w1 * std::pow(t, k.alpha) * rgamma(1.0 + k.alpha) +
               k.w2 * std::pow(t, k.alpha2) * rgamma(1.0 + k.alpha2);
    }
    throw domain_error("kernels: unknown family");
}

std::complex<double> eta_laplace(const Kernel& k, std::complex<double> s) {
    using cd = std::complex<double>;
    if (s == cd(0.0, 0.0))
        throw domain_error("kernels: eta_laplace undefined at s = 0");
    switch (k.family) {
    case KernelFamily::Standard:
        return 1.0 / s;
    case KernelFamily::Subdiffusive:
        return std::pow(s, -k.alpha);
    case KernelFamily::Tempered:
        return std::pow(s + 1.0 / k.tau, -k.alpha);
    case KernelFamily::MixStandardSub:
        return k.w1 * std::pow(s, -k.alpha) + k.w2 / s;
    case KernelFamily::MixSubSub:
        return k.w1 * std::pow(s, -k.alpha) + k.w2 * std::pow(s, -k.alpha2);
    }
    throw domain_error("kernels: unknown family");
}

std::complex<double> levy_exponent(const Kernel& k, std::complex<double> s) {
    return 1.0 / eta_laplace(k, s);
}

ValidationReport validate(const Kernel& k) {
    ValidationReport rep;
    rep.pass = true;
    rep.min_h = 0.0;
    try {
        k.require_valid();
    } catch (const domain_error& e) {
        rep.pass = false;
        rep.issues.push_back(e.what());
        return rep;
    }
    if (k.family == KernelFamily::Standard) {
        rep.issues.push_back("degenerate subordination density (point mass), not probed");
        return rep;
    }
    // Probe the subordination density on a coarse grid; completely monotone
    // kernels must produce h >= 0 up to inversion noise.
    double min_h = 0.0;
    for (double t : {0.25, 1.0, 4.0}) {
        for (int i = 0; i <= 16; ++i) {
            double u = 3.0 * t * i / 16.0;
            double h;
            try {
                h = subordination_density(k, u, t);
            } catch (const error& e) {
                rep.pass = false;
                rep.issues.push_back(std::string("density evaluation failed: ") + e.what());
                return rep;
            }
            if (h < min_h) min_h = h;
        }
    }
    rep.min_h = min_h;
    if (min_h < -1e-6) {
        rep.pass = false;
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "subordination density dips to %.3e (below -1e-6)", min_h);
        rep.issues.push_back(buf);
    }
    return rep;
}

namespace {

double parse_double_field(const std::string& text, const std::string& whole) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size())
            throw domain_error("kernels: bad numeric field '" + text + "' in kernel spec '" + whole + "'");
        return v;
    } catch (const domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw domain_error("kernels: bad numeric field '" + text + "' in kernel spec '" + whole + "'");
    }
}

} // namespace

Kernel parse_kernel(const std::string& text) {
    // Syntax: name[:key=value[,key=value...]]
    //   standard
    //   sub:alpha=0.8
    //   tempered:alpha=0.8,tau=2.0
    //   mix-gs:alpha=0.8,w1=0.5        (w2 = 1 - w1)
    //   mix-ss:alpha1=0.6,alpha2=0.8,w1=0.5
    std::string name = text;
    std::string args;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    double alpha = -1.0, alpha2 = -1.0, tau = -1.0, w1 = -1.0;
    std::string piece;
    std::istringstream in(args);
    while (std::getline(in, piece, ',')) {
        auto eq = piece.find('=');
        if (eq == std::string::npos)
            throw domain_error("kernels: expected key=value, got '" + piece +
                               "' in kernel spec '" + text + "'");
        std::string key = piece.substr(0, eq);
        double val = parse_double_field(piece.substr(eq + 1), text);
        if (key == "alpha" || key == "alpha1")
            alpha = val;
        else if (key == "alpha2")
            alpha2 = val;
        else if (key == "tau")
            tau = val;
        else if (key == "w1")
            w1 = val;
        else
            throw domain_error("kernels: unknown key '" + key + "' in kernel spec '" +
                               text + "'");
    }
    auto need = [&](double v, const char* key) {
        if (v < 0.0)
            throw domain_error(std::string("kernels: kernel spec '") + text +
                               "' is missing " + key);
        return v;
    };
    if (name == "standard") {
        if (!args.empty())
            throw domain_error("kernels: standard kernel takes no parameters");
        return Kernel::standard();
    }
    if (name == "sub") return Kernel::subdiffusive(need(alpha, "alpha"));
    if (name == "tempered")
        return Kernel::tempered(need(alpha, "alpha"), need(tau, "tau"));
    if (name == "mix-gs") {
        double w = need(w1, "w1");
        return Kernel::mix_standard_sub(need(alpha, "alpha"), w, 1.0 - w);
    }
    if (name == "mix-ss") {
        double w = need(w1, "w1");
        return Kernel::mix_sub_sub(need(alpha, "alpha1"), need(alpha2, "alpha2"), w,
                                   1.0 - w);
    }
    throw domain_error("kernels: unknown kernel family '" + name + "'");
}

std::string to_string(const Kernel& k) {
    char buf[160];
    switch (k.family) {
    case KernelFamily::Standard:
        return "standard";
    case KernelFamily::Subdiffusive:
        std::snprintf(buf, sizeof(buf), "sub:alpha=%.15g", k.alpha);
        return buf;
    case KernelFamily::Tempered:
        std::snprintf(buf, sizeof(buf), "tempered:alpha=%.15g,tau=%.15g", k.alpha, k.tau);
        return buf;
    case KernelFamily::MixStandardSub:
        std::snprintf(buf, sizeof(buf), "mix-gs:alpha=%.15g,w1=%.15g", k.alpha, k.w1);
        return buf;
    case KernelFamily::MixSubSub:
        std::snprintf(buf, sizeof(buf), "mix-ss:alpha1=%.15g,alpha2=%.15g,w1=%.15g",
                      k.alpha, k.alpha2, k.w1);
        return buf;
    }
    throw domain_error("kernels: unknown family");
}

} // namespace ggbm
