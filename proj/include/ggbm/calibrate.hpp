#pragma once

#include <string>
#include <vector>

#include "ggbm/kernels.hpp"
#include "ggbm/pricing.hpp"

namespace ggbm {

// An option chain: one quote date, one spot/rate, many records.
// CSV schema (header required, UTF-8, '.' decimal separator):
//   quote_date,spot,rate,strike,maturity_years,kind,market_price
// with kind in {C, P}.
struct OptionChain {
    std::string quote_date;
    double spot = 0.0;
    double rate = 0.0;
    std::vector<OptionSpec> records;

    void require_valid() const;
};

OptionChain load_chain_csv(const std::string& path);
void save_chain_csv(const OptionChain& chain, const std::string& path);

// Calibration objective; every variant is a mean over the active records.
//  - Price:    (model - market)^2                           (default)
//  - Relative: ((model - market) / max(market, 1e-8))^2
//  - Vega:     ((model - market) / max(vega, 1e-8))^2 with vega the
//    Black-Scholes vega of the record at its own implied volatility — a
//    fixed market-derived weight approximating an implied-vol-space fit.
//    Quotes outside the attainable closed-form range fall back to weight 1.
enum class Objective { Price, Relative, Vega };

struct CalibrationOptions {
    RateMode mode = RateMode::RiskNeutral;
    Discounting discounting = Discounting::Operational;
    bool include_puts = false; // default: calls only
    Objective objective = Objective::Price;
    double sigma_lo = 1e-4;    // golden-section bracket
    double sigma_hi = 3.0;
    double sigma_tol = 1e-5;   // absolute tolerance in sigma
    int grid_n = 800;
    int threads = 1;
    // Fixed secondary parameters for families swept by mse_vs_alpha:
    double tau = 1.0;    // Tempered
    double w1 = 0.5;     // mixtures
    double alpha2 = 0.8; // MixSubSub upper exponent (the sweep drives alpha1)
    KernelFamily family = KernelFamily::Subdiffusive;
};

struct SigmaFit {
    double sigma = 0.0;
    double mse = 0.0; // objective value at sigma (plain MSE under Objective::Price)
};

// Implied volatility for a fixed kernel: golden-section search of sigma in
// [sigma_lo, sigma_hi] minimizing the mean squared price error over the
// chain, to sigma_tol. Model prices are gbs calls (puts by parity when
// included). The kernel's density grids are built once per distinct maturity
// and shared across the search (h does not depend on sigma). Throws
// calibration_error for an empty bracket or a flat all-zero objective.
SigmaFit implied_sigma(const OptionChain& chain, const Kernel& k,
                       const CalibrationOptions& opts = {});

struct CalibrationResult {
    Kernel kernel;          // fitted kernel (best alpha)
    double sigma_hat = 0.0; // implied sigma at the best alpha
    double mse = 0.0;       // objective at the optimum
    std::vector<double> per_record_abs_error; // at the optimum, chain order
    std::vector<double> alpha_grid;
    std::vector<double> mse_curve;   // aligned with alpha_grid
    std::vector<double> sigma_curve; // implied sigma per alpha
    std::size_t best_index = 0;
};

// Sweeps the alpha grid (each point: build kernel, fit sigma, record MSE) and
// returns the full curve plus the argmin. alpha = 1 maps to the Standard
// kernel for the Subdiffusive family; other families require alpha in their
// admissible range. Grid points are independent and parallelized over
// opts.threads with deterministic output.
CalibrationResult mse_vs_alpha(const OptionChain& chain,
                               const std::vector<double>& alpha_grid,
                               const CalibrationOptions& opts = {});

// Moneyness classification of a record relative to spot (for calls:
// strike < spot is in-the-money).
enum class Moneyness { In, At, Out };
Moneyness classify_moneyness(double strike, double spot);

struct MoneynessRow {
    double alpha = 0.0;
    double sigma = 0.0; // implied sigma fitted at this alpha
    double strike = 0.0;
    double maturity = 0.0;
    OptionKind kind = OptionKind::Call;
    Moneyness moneyness = Moneyness::At;
    double market = 0.0;
    double model = 0.0;
    double abs_error = 0.0;
};

// Per-record absolute pricing error for each alpha in `alphas` (sigma
// re-fitted per alpha). Row count = records x alphas.
std::vector<MoneynessRow> moneyness_profile(const OptionChain& chain,
                                            const std::vector<double>& alphas,
                                            const CalibrationOptions& opts = {});

} // namespace ggbm
