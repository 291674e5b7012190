#include "ggbm/calibrate.hpp"

#include "ggbm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ggbm {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& what, int line) {
    try {
        size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "calibrate: bad " << what << " '" << field << "' at line " << line;
        throw io_error(os.str());
    }
}

constexpr const char* kChainHeader =
    "quote_date,spot,rate,strike,maturity_years,kind,market_price";

// Everything needed to evaluate the calibration objective at one sigma.
struct ObjectiveContext {
    const OptionChain* chain;
    Kernel kernel;
    CalibrationOptions opts;
    std::vector<std::size_t> active; // record indices entering the MSE
    std::vector<double> weights;     // squared-error multipliers, aligned with active
    std::map<double, DensityGrid> grids; // per distinct maturity (non-Standard)

    const DensityGrid* grid_for(double T) const {
        if (kernel.family == KernelFamily::Standard) return nullptr;
        auto it = grids.find(T);
        return it == grids.end() ? nullptr : &it->second;
    }

    double model_price(const OptionSpec& rec, const MarketParams& m,
                       const PricingOptions& popts) const {
        const DensityGrid* g = grid_for(rec.maturity);
        double call = gbs_call(kernel, m, rec.strike, rec.maturity, popts, g);
        if (rec.kind == OptionKind::Call) return call;
        // put by parity with the matching mixture discount factor
        double df = mixture_discount_factor(kernel, m, rec.maturity, popts, g);
        return call - m.x0 + rec.strike * df;
    }

    // returns (mse, largest model price seen) over the active records
    std::pair<double, double> evaluate(double sigma) const {
        MarketParams m;
        m.x0 = chain->spot;
        m.mu = chain->rate; // drift pinned to the quoted rate
        m.sigma = sigma;
        m.r = chain->rate;
        PricingOptions popts;
        popts.mode = opts.mode;
        popts.discounting = opts.discounting;
        popts.grid_n = opts.grid_n;
        double sum = 0.0;
        double max_model = 0.0;
        for (std::size_t j = 0; j < active.size(); ++j) {
            const OptionSpec& rec = chain->records[active[j]];
            double model = model_price(rec, m, popts);
            max_model = std::max(max_model, std::abs(model));
            double err = model - *rec.market_price;
            sum += weights[j] * err * err;
        }
        return {sum / static_cast<double>(active.size()), max_model};
    }
};

double closed_form_price(MarketParams m, const OptionSpec& rec, RateMode mode) {
    return rec.kind == OptionKind::Call ? bs_call(m, rec.strike, rec.maturity, mode)
                                        : bs_put(m, rec.strike, rec.maturity, mode);
}

// Black-Scholes implied volatility of the record's quote by bisection on the
// closed form; 0 when the quote is outside the attainable price range.
double implied_vol(const MarketParams& base, const OptionSpec& rec, RateMode mode) {
    double lo = 1e-6, hi = 5.0;
    MarketParams m = base;
    double target = *rec.market_price;
    m.sigma = lo;
    if (!(target > closed_form_price(m, rec, mode))) return 0.0;
    m.sigma = hi;
    if (!(target < closed_form_price(m, rec, mode))) return 0.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        m.sigma = mid;
        (closed_form_price(m, rec, mode) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Central-difference vega of the closed form (robust to the rate mode, whose
// discount factor can itself depend on sigma).
double closed_form_vega(const MarketParams& base, const OptionSpec& rec,
                        RateMode mode, double sigma) {
    const double h = 1e-4;
    MarketParams m = base;
    m.sigma = sigma + h;
    double up = closed_form_price(m, rec, mode);
    m.sigma = std::max(sigma - h, 1e-6);
    double dn = closed_form_price(m, rec, mode);
    return (up - dn) / (sigma + h - m.sigma);
}

ObjectiveContext make_context(const OptionChain& chain, const Kernel& k,
                              const CalibrationOptions& opts) {
    chain.require_valid();
    k.require_valid();
    if (!(opts.sigma_lo > 0.0) || !(opts.sigma_lo < opts.sigma_hi))
        throw calibration_error("calibrate: empty or invalid sigma bracket");
    if (!(opts.sigma_tol > 0.0))
        throw calibration_error("calibrate: sigma tolerance must be > 0");

    ObjectiveContext ctx;
    ctx.chain = &chain;
    ctx.kernel = k;
    ctx.opts = opts;
    for (std::size_t i = 0; i < chain.records.size(); ++i) {
        const OptionSpec& rec = chain.records[i];
        if (rec.kind == OptionKind::Put && !opts.include_puts) continue;
        if (!rec.market_price)
            throw calibration_error("calibrate: record without a market price");
        ctx.active.push_back(i);
    }
    if (ctx.active.empty())
        throw calibration_error("calibrate: no usable records (calls only unless "
                                "puts are included)");
    ctx.weights.assign(ctx.active.size(), 1.0);
    if (opts.objective != Objective::Price) {
        MarketParams m0;
        m0.x0 = chain.spot;
        m0.mu = chain.rate;
        m0.r = chain.rate;
        for (std::size_t j = 0; j < ctx.active.size(); ++j) {
            const OptionSpec& rec = chain.records[ctx.active[j]];
            double scale = 1.0;
            if (opts.objective == Objective::Relative) {
                scale = std::max(*rec.market_price, 1e-8);
            } else { // Objective::Vega
                double iv = implied_vol(m0, rec, opts.mode);
                if (iv > 0.0)
                    scale = std::max(closed_form_vega(m0, rec, opts.mode, iv), 1e-8);
            }
            ctx.weights[j] = 1.0 / (scale * scale);
        }
    }
    if (k.family != KernelFamily::Standard) {
        for (std::size_t idx : ctx.active) {
            double T = chain.records[idx].maturity;
            if (!ctx.grids.count(T))
                ctx.grids.emplace(T, density_grid(k, T, opts.grid_n));
        }
    }
    return ctx;
}

Kernel kernel_for_alpha(const CalibrationOptions& opts, double alpha) {
    switch (opts.family) {
    case KernelFamily::Subdiffusive:
        if (std::abs(alpha - 1.0) <= 1e-12) return Kernel::standard();
        return Kernel::subdiffusive(alpha);
    case KernelFamily::Tempered:
        return Kernel::tempered(alpha, opts.tau);
    case KernelFamily::MixStandardSub:
        return Kernel::mix_standard_sub(alpha, opts.w1, 1.0 - opts.w1);
    case KernelFamily::MixSubSub:
        return Kernel::mix_sub_sub(alpha, opts.alpha2, opts.w1, 1.0 - opts.w1);
    case KernelFamily::Standard:
        return Kernel::standard();
    }
    throw domain_error("calibrate: unknown kernel family");
}

} // namespace

void OptionChain::require_valid() const {
    if (!(spot > 0.0)) throw domain_error("calibrate: spot must be > 0");
    if (!std::isfinite(rate)) throw domain_error("calibrate: rate must be finite");
    if (records.empty()) throw domain_error("calibrate: chain has no records");
    for (const OptionSpec& rec : records) rec.require_valid();
}

OptionChain load_chain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("calibrate: cannot open chain file '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw io_error("calibrate: empty chain file '" + path + "'");
    if (trim(line) != kChainHeader)
        throw io_error("calibrate: unexpected chain header; want '" +
                       std::string(kChainHeader) + "'");
    OptionChain chain;
    int line_no = 1;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string row = trim(line);
        if (row.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ss(row);
        std::string piece;
        while (std::getline(ss, piece, ',')) fields.push_back(trim(piece));
        if (fields.size() != 7) {
            std::ostringstream os;
            os << "calibrate: expected 7 fields at line " << line_no << ", got "
               << fields.size();
            throw io_error(os.str());
        }
        double spot = parse_number(fields[1], "spot", line_no);
        double rate = parse_number(fields[2], "rate", line_no);
        OptionSpec rec;
        rec.strike = parse_number(fields[3], "strike", line_no);
        rec.maturity = parse_number(fields[4], "maturity_years", line_no);
        if (fields[5] == "C")
            rec.kind = OptionKind::Call;
        else if (fields[5] == "P")
            rec.kind = OptionKind::Put;
        else {
            std::ostringstream os;
            os << "calibrate: kind must be C or P at line " << line_no;
            throw io_error(os.str());
        }
        rec.market_price = parse_number(fields[6], "market_price", line_no);
        if (first) {
            chain.quote_date = fields[0];
            chain.spot = spot;
            chain.rate = rate;
            first = false;
        } else {
            bool same = fields[0] == chain.quote_date &&
                        std::abs(spot - chain.spot) <=
                            1e-9 * std::max(1.0, std::abs(chain.spot)) &&
                        std::abs(rate - chain.rate) <=
                            1e-9 * std::max(1.0, std::abs(chain.rate));
            if (!same) {
                std::ostringstream os;
                os << "calibrate: inconsistent quote_date/spot/rate at line "
                   << line_no << " (one chain per file)";
                throw io_error(os.str());
            }
        }
        chain.records.push_back(rec);
    }
    if (chain.records.empty())
        throw io_error("calibrate: chain file '" + path + "' has no records");
    chain.require_valid();
    return chain;
}

void save_chain_csv(const OptionChain& chain, const std::string& path) {
    chain.require_valid();
    std::ofstream out(path);
    if (!out) throw io_error("calibrate: cannot write chain file '" + path + "'");
    out << kChainHeader << "\n";
    char buf[256];
    for (const OptionSpec& rec : chain.records) {
        if (!rec.market_price)
            throw io_error("calibrate: cannot save a record without a market price");
        std::snprintf(buf, sizeof(buf), "%s,%.15g,%.15g,%.15g,%.15g,%c,%.15g\n",
                      chain.quote_date.c_str(), chain.spot, chain.rate, rec.strike,
                      rec.maturity, rec.kind == OptionKind::Call ? 'C' : 'P',
                      *rec.market_price);
        out << buf;
    }
    out.flush();
    if (!out) throw io_error("calibrate: write failed for '" + path + "'");
}

SigmaFit implied_sigma(const OptionChain& chain, const Kernel& k,
                       const CalibrationOptions& opts) {
    ObjectiveContext ctx = make_context(chain, k, opts);

    double max_model_seen = 0.0;
    auto objective = [&](double sigma) {
        auto [mse, max_model] = ctx.evaluate(sigma);
        max_model_seen = std::max(max_model_seen, max_model);
        return mse;
    };

    constexpr double invphi = 0.61803398874989484820458683436563812;
    double a = opts.sigma_lo, b = opts.sigma_hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > opts.sigma_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(x2);
        }
    }
    SigmaFit fit;
    fit.sigma = 0.5 * (a + b);
    fit.mse = objective(fit.sigma);
    if (max_model_seen == 0.0)
        throw calibration_error("calibrate: flat objective — every model price is "
                                "zero across the sigma bracket");
    return fit;
}

CalibrationResult mse_vs_alpha(const OptionChain& chain,
                               const std::vector<double>& alpha_grid,
                               const CalibrationOptions& opts) {
    chain.require_valid();
    if (alpha_grid.empty())
        throw domain_error("calibrate: empty alpha grid");

    const std::size_t n = alpha_grid.size();
    std::vector<Kernel> kernels(n);
    for (std::size_t i = 0; i < n; ++i)
        kernels[i] = kernel_for_alpha(opts, alpha_grid[i]); // validates alpha

    CalibrationResult result;
    result.alpha_grid = alpha_grid;
    result.mse_curve.assign(n, 0.0);
    result.sigma_curve.assign(n, 0.0);

    int threads = resolve_threads(opts.threads);
    CalibrationOptions inner = opts;
    inner.threads = 1;
    parallel_for(static_cast<std::int64_t>(n), threads,
                 [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            SigmaFit fit = implied_sigma(chain, kernels[static_cast<std::size_t>(i)],
                                         inner);
            result.mse_curve[static_cast<std::size_t>(i)] = fit.mse;
            result.sigma_curve[static_cast<std::size_t>(i)] = fit.sigma;
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (result.mse_curve[i] < result.mse_curve[best]) best = i;
    result.best_index = best;
    result.kernel = kernels[best];
    result.sigma_hat = result.sigma_curve[best];
    result.mse = result.mse_curve[best];

    // absolute per-record errors at the optimum, aligned with the chain
    ObjectiveContext ctx = make_context(chain, result.kernel, inner);
    MarketParams m;
    m.x0 = chain.spot;
    m.mu = chain.rate;
    m.sigma = result.sigma_hat;
    m.r = chain.rate;
    PricingOptions popts;
    popts.mode = opts.mode;
    popts.discounting = opts.discounting;
    popts.grid_n = opts.grid_n;
    result.per_record_abs_error.reserve(chain.records.size());
    for (const OptionSpec& rec : chain.records) {
        double model = ctx.model_price(rec, m, popts);
        double market = rec.market_price ? *rec.market_price : 0.0;
        result.per_record_abs_error.push_back(std::abs(model - market));
    }
    return result;
}

Moneyness classify_moneyness(double strike, double spot) {
    if (std::abs(strike - spot) <= 1e-6 * spot) return Moneyness::At;
    return strike < spot ? Moneyness::In : Moneyness::Out;
}

std::vector<MoneynessRow> moneyness_profile(const OptionChain& chain,
                                            const std::vector<double>& alphas,
                                            const CalibrationOptions& opts) {
    chain.require_valid();
    if (alphas.empty()) throw domain_error("calibrate: empty alpha list");

    const std::size_t na = alphas.size();
    const std::size_t nr = chain.records.size();
    std::vector<MoneynessRow> rows(na * nr);

    int threads = resolve_threads(opts.threads);
    CalibrationOptions inner = opts;
    inner.threads = 1;
    parallel_for(static_cast<std::int64_t>(na), threads,
                 [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t ia = begin; ia < end; ++ia) {
            double alpha = alphas[static_cast<std::size_t>(ia)];
            Kernel k = kernel_for_alpha(inner, alpha);
            SigmaFit fit = implied_sigma(chain, k, inner);
            ObjectiveContext ctx = make_context(chain, k, inner);
            MarketParams m;
            m.x0 = chain.spot;
            m.mu = chain.rate;
            m.sigma = fit.sigma;
            m.r = chain.rate;
            PricingOptions popts;
            popts.mode = inner.mode;
            popts.discounting = inner.discounting;
            popts.grid_n = inner.grid_n;
            for (std::size_t ir = 0; ir < nr; ++ir) {
                const OptionSpec& rec = chain.records[ir];
                MoneynessRow& row = rows[static_cast<std::size_t>(ia) * nr + ir];
                row.alpha = alpha;
                row.sigma = fit.sigma;
                row.strike = rec.strike;
                row.maturity = rec.maturity;
                row.kind = rec.kind;
                row.moneyness = classify_moneyness(rec.strike, chain.spot);
                row.market = rec.market_price ? *rec.market_price : 0.0;
                row.model = ctx.model_price(rec, m, popts);
                row.abs_error = std::abs(row.model - row.market);
            }
        }
    });
    return rows;
}

} // namespace ggbm
