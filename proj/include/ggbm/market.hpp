#pragma once

#include <cmath>

#include "ggbm/errors.hpp"

namespace ggbm {

// Market constants shared by moments, simulation, pricing and calibration.
struct MarketParams {
    double x0 = 1.0;    // initial price, > 0
    double mu = 0.0;    // drift (1/time)
    double sigma = 0.1; // volatility (1/sqrt(time)), > 0
    double r = 0.0;     // risk-free rate (1/time)

    double sigma2() const { return sigma * sigma; }
    // Log-drift mu_bar = mu - sigma^2/2.
    double mubar() const { return mu - 0.5 * sigma * sigma; }

    void require_valid() const {
        if (!(x0 > 0.0)) throw domain_error("market: x0 must be > 0");
        if (!(sigma > 0.0)) throw domain_error("market: sigma must be > 0");
        if (!std::isfinite(mu) || !std::isfinite(r) || !std::isfinite(sigma) ||
            !std::isfinite(x0))
            throw domain_error("market: parameters must be finite");
    }
};

} // namespace ggbm
