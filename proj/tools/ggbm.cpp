// ggbm: command-line front door for the gGBM library.
//
// Subcommands: price, calibrate, simulate, pdf, moments.
// Exit codes:  0 success, 2 usage error, 3 numeric failure, 4 I/O error.
// Output:      CSV (header row, %.15g numbers) or JSON; written to stdout
//              ("-") or to a file via write-to-temp-then-rename so a failed
//              run never leaves a partial output behind.
// Config:      --config FILE with key=value lines (keys are the long option
//              names of the subcommand, without the leading --); values from
//              the file are merged under the command line, flags win.
// Threads:     --threads N requests N workers; the GGBM_THREADS environment
//              variable caps the effective count (and supplies the default
//              when --threads is absent or 0).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggbm/calibrate.hpp"
#include "ggbm/errors.hpp"
#include "ggbm/kernels.hpp"
#include "ggbm/lapinv.hpp"
#include "ggbm/market.hpp"
#include "ggbm/moments.hpp"
#include "ggbm/parallel.hpp"
#include "ggbm/pricing.hpp"
#include "ggbm/simulate.hpp"
#include "ggbm/version.hpp"

namespace {

using json = nlohmann::ordered_json;

// %.15g: 15 significant digits, comfortably above the 12 the CSV contract
// guarantees, without the noise tail of full round-trip printing.
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ';';
    return s;
}

// "a:b:n" -> n points from a to b, both ends inclusive (n == 1 -> {a}).
std::vector<double> parse_range(const std::string& spec, const char* flag) {
    double a = 0.0, b = 0.0;
    long n = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &a, &b, &n, &extra) != 3)
        throw ggbm::domain_error(std::string("cli: ") + flag +
                                 " expects a:b:n, got '" + spec + "'");
    if (n < 1)
        throw ggbm::domain_error(std::string("cli: ") + flag +
                                 " needs n >= 1 points");
    if (n > 1 && !(b > a))
        throw ggbm::domain_error(std::string("cli: ") + flag +
                                 " needs b > a when n > 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

// Whole-buffer write to path via temp file + rename; "-" means stdout.
void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp(path + ".tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw ggbm::io_error("cli: cannot open '" + tmp.string() + "' for writing");
        f << content;
        f.flush();
        if (!f)
            throw ggbm::io_error("cli: write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw ggbm::io_error("cli: renaming '" + tmp.string() + "' to '" + path +
                             "' failed: " + ec.message());
}

// key=value lines ('#' starts a comment); each becomes a synthetic
// "--key=value" token injected ahead of the real flags, so TakeLast parsing
// makes explicit flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ggbm::io_error("cli: cannot read config file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string key = eq == std::string::npos ? std::string() : trim(line.substr(0, eq));
        if (key.empty())
            throw ggbm::io_error("cli: config '" + path + "' line " +
                                 std::to_string(lineno) + ": expected key=value");
        out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return out;
}

// Worker count: explicit request (env fallback when <= 0), then capped by
// GGBM_THREADS if set.
int effective_threads(int requested) {
    int t = ggbm::resolve_threads(requested);
    if (const char* env = std::getenv("GGBM_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) t = static_cast<int>(std::min<long>(t, cap));
    }
    return t;
}

ggbm::RateMode parse_mode(const std::string& s) {
    return s == "drift-discounted" ? ggbm::RateMode::DriftDiscounted
                                   : ggbm::RateMode::RiskNeutral;
}

ggbm::Discounting parse_discounting(const std::string& s) {
    return s == "physical" ? ggbm::Discounting::Physical
                           : ggbm::Discounting::Operational;
}

constexpr const char* kKernelHelp =
    "Kernel spec: standard | sub:alpha=A | tempered:alpha=A,tau=T | "
    "mix-gs:alpha=A,w1=W | mix-ss:alpha1=A,alpha2=B,w1=W";

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // --config pre-pass: pull the flag out, load the file, inject its
        // key=value pairs as synthetic flags right after the subcommand name.
        std::string config_path;
        for (std::size_t i = 0; i < args.size();) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size())
                    throw ggbm::domain_error("cli: --config needs a file path");
                config_path = args[i + 1];
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                           args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            } else if (args[i].rfind("--config=", 0) == 0) {
                config_path = args[i].substr(9);
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
        if (!config_path.empty()) {
            std::vector<std::string> extra = config_tokens(config_path);
            const char* subs[] = {"price", "calibrate", "simulate", "pdf", "moments"};
            std::size_t at = args.size();
            for (std::size_t i = 0; i < args.size() && at == args.size(); ++i)
                for (const char* s : subs)
                    if (args[i] == s) at = i + 1;
            args.insert(args.begin() + static_cast<std::ptrdiff_t>(at),
                        extra.begin(), extra.end());
        }

        CLI::App app{
            "ggbm: option pricing, densities, moments, simulation and calibration for\n"
            "geometric Brownian motion time-changed by an inverse subordinator.\n"};
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.set_version_flag("--version", std::string(ggbm::version_string));
        app.require_subcommand(1);
        app.footer(
            "Common conventions:\n"
            "  --config FILE   key=value lines (long option names of the subcommand,\n"
            "                  no leading --); command-line flags override the file.\n"
            "  -o/--output     '-' = stdout (default); files are written to a temp\n"
            "                  path and renamed, so partial outputs never appear.\n"
            "  CSV output      always starts with a header row; numbers carry 15\n"
            "                  significant digits.\n"
            "  GGBM_THREADS    caps worker threads (and is the default when\n"
            "                  --threads is 0/absent).\n"
            "  Exit codes      0 success, 2 usage, 3 numeric failure, 4 I/O.");

        // ----------------------------------------------------------- price
        auto* pc = app.add_subcommand(
            "price", "European option prices under the generalized model");
        pc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string pc_kernel, pc_strikes, pc_kind = "call", pc_mode = "risk-neutral";
        std::string pc_disc = "operational", pc_format = "csv", pc_out = "-";
        double pc_spot = 0.0, pc_strike = 0.0, pc_T = 0.0, pc_rate = 0.0;
        double pc_sigma = 0.0, pc_mu = 0.0;
        int pc_grid_n = 800;
        pc->add_option("--kernel", pc_kernel, kKernelHelp)->required();
        pc->add_option("--spot", pc_spot, "Spot price x0 (> 0)")
            ->required()->check(CLI::PositiveNumber);
        auto* pc_strike_opt =
            pc->add_option("--strike", pc_strike, "Single strike K (> 0)")
                ->check(CLI::PositiveNumber);
        auto* pc_strikes_opt = pc->add_option(
            "--strikes", pc_strikes, "Strike sweep a:b:n (ends inclusive)");
        pc_strike_opt->excludes(pc_strikes_opt);
        pc_strikes_opt->excludes(pc_strike_opt);
        pc->add_option("--maturity", pc_T, "Maturity in years (> 0)")
            ->required()->check(CLI::PositiveNumber);
        pc->add_option("--rate", pc_rate, "Risk-free rate r (default 0)");
        pc->add_option("--sigma", pc_sigma, "Volatility (> 0)")
            ->required()->check(CLI::PositiveNumber);
        auto* pc_mu_opt = pc->add_option(
            "--mu", pc_mu, "Drift; defaults to the rate (risk-neutral drift)");
        pc->add_option("--kind", pc_kind, "call | put")
            ->check(CLI::IsMember({"call", "put"}));
        pc->add_option("--mode", pc_mode,
                       "Closed-form rate convention: risk-neutral | drift-discounted")
            ->check(CLI::IsMember({"risk-neutral", "drift-discounted"}));
        pc->add_option("--discount", pc_disc,
                       "Mixture discounting: operational | physical")
            ->check(CLI::IsMember({"operational", "physical"}));
        pc->add_option("--grid-n", pc_grid_n,
                       "Density-grid intervals for the operational-time mixture")
            ->check(CLI::Range(8, 100000));
        pc->add_option("--format", pc_format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        pc->add_option("-o,--output", pc_out, "Output path ('-' = stdout)");
        pc->footer("CSV columns: strike,maturity,kind,price");

        // ------------------------------------------------------- calibrate
        auto* cc = app.add_subcommand(
            "calibrate",
            "Fit (alpha, sigma) to an option chain by squared price error");
        cc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string cc_chain, cc_family = "sub", cc_alpha_grid = "0.1:1.0:19";
        std::string cc_mode = "risk-neutral", cc_disc = "operational";
        std::string cc_objective = "price", cc_out = "-", cc_curve_out;
        double cc_tau = 1.0, cc_w1 = 0.5, cc_alpha2 = 0.8;
        double cc_sigma_lo = 1e-4, cc_sigma_hi = 3.0, cc_sigma_tol = 1e-5;
        int cc_grid_n = 800, cc_threads = 0;
        bool cc_puts = false;
        cc->add_option("--chain", cc_chain,
                       "Option-chain CSV: quote_date,spot,rate,strike,"
                       "maturity_years,kind,market_price (kind C|P)")
            ->required();
        cc->add_option("--kernel-family", cc_family,
                       "sub | tempered | mix-gs | mix-ss (alpha is swept; "
                       "sub maps alpha=1 to the standard kernel)")
            ->check(CLI::IsMember({"sub", "tempered", "mix-gs", "mix-ss"}));
        cc->add_option("--alpha-grid", cc_alpha_grid,
                       "Alpha sweep a:b:n, ends inclusive (default 0.1:1.0:19)");
        cc->add_option("--tau", cc_tau, "Tempered kernel crossover time")
            ->check(CLI::PositiveNumber);
        cc->add_option("--w1", cc_w1, "First mixture weight (w2 = 1 - w1)");
        cc->add_option("--alpha2", cc_alpha2,
                       "mix-ss upper exponent (sweep drives alpha1 < alpha2)");
        cc->add_option("--mode", cc_mode, "risk-neutral | drift-discounted")
            ->check(CLI::IsMember({"risk-neutral", "drift-discounted"}));
        cc->add_option("--discount", cc_disc, "operational | physical")
            ->check(CLI::IsMember({"operational", "physical"}));
        cc->add_option("--objective", cc_objective,
                       "price | relative | vega (squared error weighting)")
            ->check(CLI::IsMember({"price", "relative", "vega"}));
        cc->add_flag("--include-puts", cc_puts,
                     "Include puts in the objective (default: calls only)");
        cc->add_option("--sigma-lo", cc_sigma_lo, "Sigma bracket lower end")
            ->check(CLI::PositiveNumber);
        cc->add_option("--sigma-hi", cc_sigma_hi, "Sigma bracket upper end")
            ->check(CLI::PositiveNumber);
        cc->add_option("--sigma-tol", cc_sigma_tol, "Absolute sigma tolerance")
            ->check(CLI::PositiveNumber);
        cc->add_option("--grid-n", cc_grid_n, "Density-grid intervals")
            ->check(CLI::Range(8, 100000));
        cc->add_option("--threads", cc_threads,
                       "Worker threads over the alpha grid (0 = GGBM_THREADS or 1)")
            ->check(CLI::Range(0, 256));
        cc->add_option("-o,--output", cc_out, "Calibration result JSON ('-' = stdout)");
        cc->add_option("--mse-curve", cc_curve_out,
                       "Optional CSV of the sweep (columns: alpha,mse,sigma)");
        cc->footer("Result JSON: family, kernel, alpha_hat, sigma_hat, mse, "
                   "alpha_grid, mse_curve, sigma_curve, per_record_abs_error.");

        // -------------------------------------------------------- simulate
        auto* sc = app.add_subcommand(
            "simulate", "Monte-Carlo path ensemble and per-time statistics");
        sc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string sc_kernel, sc_grid, sc_format = "csv", sc_out = "-", sc_paths_out;
        double sc_spot = 1.0, sc_mu = 0.0, sc_sigma = 0.0, sc_du_factor = 500.0;
        std::uint64_t sc_seed = 12345;
        std::size_t sc_paths = 1000;
        int sc_grid_n = 800, sc_threads = 0;
        sc->add_option("--kernel", sc_kernel, kKernelHelp)->required();
        sc->add_option("--spot", sc_spot, "Initial price x0 (> 0)")
            ->check(CLI::PositiveNumber);
        sc->add_option("--mu", sc_mu, "Drift");
        sc->add_option("--sigma", sc_sigma, "Volatility (> 0)")
            ->required()->check(CLI::PositiveNumber);
        sc->add_option("--grid", sc_grid, "Observation times t0:t1:n (t0 > 0)")
            ->required();
        sc->add_option("--paths", sc_paths, "Number of paths")
            ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
        sc->add_option("--seed", sc_seed,
                       "RNG seed; identical seeds give byte-identical output "
                       "for any thread count");
        sc->add_option("--threads", sc_threads,
                       "Worker threads (0 = GGBM_THREADS or 1)")
            ->check(CLI::Range(0, 256));
        sc->add_option("--grid-n", sc_grid_n,
                       "Density-grid intervals (tempered/mixed kernels)")
            ->check(CLI::Range(8, 100000));
        sc->add_option("--du-factor", sc_du_factor,
                       "Subdiffusive walk resolution: du = (t_max/du-factor)^alpha")
            ->check(CLI::PositiveNumber);
        sc->add_option("--format", sc_format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        sc->add_option("-o,--output", sc_out, "Summary output ('-' = stdout)");
        sc->add_option("--paths-out", sc_paths_out,
                       "Optional per-path CSV (columns: path,t,x)");
        sc->footer("Summary CSV columns: t,mean,mean_se,msd,msd_se,log_mean,"
                   "log_mean_se,log_variance,log_variance_se (msd = second "
                   "moment <x^2>; row t=0 is the initial condition).");

        // ------------------------------------------------------------- pdf
        auto* dc = app.add_subcommand(
            "pdf", "Price density or operational-time density as plot data");
        dc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string dc_kernel, dc_which = "price", dc_route = "direct", dc_x;
        std::string dc_format = "csv", dc_out = "-";
        double dc_t = 0.0, dc_spot = 1.0, dc_mu = 0.0, dc_sigma = 0.0;
        int dc_grid_n = 800, dc_nodes = 32;
        double dc_scale = 1.0;
        dc->add_option("--kernel", dc_kernel, kKernelHelp)->required();
        dc->add_option("--t", dc_t, "Time / maturity (> 0)")
            ->required()->check(CLI::PositiveNumber);
        dc->add_option("--which", dc_which,
                       "price: density of x(t); density: density of the "
                       "operational time S(t)")
            ->check(CLI::IsMember({"price", "density"}));
        dc->add_option("--spot", dc_spot, "Initial price x0 (> 0)")
            ->check(CLI::PositiveNumber);
        dc->add_option("--mu", dc_mu, "Drift (price density only)");
        auto* dc_sigma_opt =
            dc->add_option("--sigma", dc_sigma, "Volatility (price density only)")
                ->check(CLI::PositiveNumber);
        dc->add_option("--x", dc_x,
                       "Price abscissas a:b:n (default 0.2*spot:3*spot:201; "
                       "price density only — the operational-time density is "
                       "emitted on its own grid)");
        dc->add_option("--route", dc_route,
                       "Price-density evaluation: direct (Laplace inversion) | "
                       "quadrature (lognormal mixture)")
            ->check(CLI::IsMember({"direct", "quadrature"}));
        dc->add_option("--grid-n", dc_grid_n, "Density-grid intervals")
            ->check(CLI::Range(8, 100000));
        dc->add_option("--inv-nodes", dc_nodes,
                       "Talbot nodes for the direct route")
            ->check(CLI::Range(16, 256));
        dc->add_option("--inv-scale", dc_scale,
                       "Talbot contour scale for the direct route")
            ->check(CLI::PositiveNumber);
        dc->add_option("--format", dc_format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        dc->add_option("-o,--output", dc_out, "Output path ('-' = stdout)");
        dc->footer("CSV columns: abscissa,value (x and the price density, or "
                   "u and the operational-time density h(u,t)).");

        // --------------------------------------------------------- moments
        auto* mc = app.add_subcommand(
            "moments", "Closed-form moment curves on a time grid");
        mc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string mc_kernel, mc_grid, mc_format = "csv", mc_out = "-";
        double mc_spot = 1.0, mc_mu = 0.0, mc_sigma = 0.0, mc_dt = 0.0;
        mc->add_option("--kernel", mc_kernel, kKernelHelp)->required();
        mc->add_option("--spot", mc_spot, "Initial price x0 (> 0)")
            ->check(CLI::PositiveNumber);
        mc->add_option("--mu", mc_mu, "Drift");
        mc->add_option("--sigma", mc_sigma, "Volatility (> 0)")
            ->required()->check(CLI::PositiveNumber);
        mc->add_option("--grid", mc_grid, "Time grid t0:t1:n (t0 >= 0)")
            ->required();
        mc->add_option("--dt", mc_dt,
                       "Window for the periodic log return (0 = grid spacing)");
        mc->add_option("--format", mc_format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        mc->add_option("-o,--output", mc_out, "Output path ('-' = stdout)");
        mc->footer("CSV columns: t,mean,msd,log_mean,log_variance,"
                   "periodic_log_return (msd = second moment <x^2>).");

        try {
            // the vector overload consumes a reversed argument list
            app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
        } catch (const CLI::CallForHelp&) {
            auto parsed = app.get_subcommands();
            std::cout << (parsed.empty() ? app.help() : parsed.back()->help());
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            std::cout << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::CallForVersion&) {
            std::cout << ggbm::version_string << "\n";
            return 0;
        } catch (const CLI::ParseError& e) {
            std::cerr << "ggbm: usage: " << one_line(e.what())
                      << " (see --help)\n";
            return 2;
        }

        if (*pc) {
            ggbm::Kernel k = ggbm::parse_kernel(pc_kernel);
            ggbm::MarketParams m;
            m.x0 = pc_spot;
            m.r = pc_rate;
            m.mu = pc_mu_opt->count() ? pc_mu : pc_rate;
            m.sigma = pc_sigma;
            m.require_valid();
            std::vector<double> strikes;
            if (pc_strikes_opt->count())
                strikes = parse_range(pc_strikes, "--strikes");
            else if (pc_strike_opt->count())
                strikes.push_back(pc_strike);
            else
                throw ggbm::domain_error("cli: price needs --strike or --strikes");
            for (double K : strikes)
                if (!(K > 0.0))
                    throw ggbm::domain_error("cli: strikes must be > 0");
            ggbm::PricingOptions popts;
            popts.mode = parse_mode(pc_mode);
            popts.discounting = parse_discounting(pc_disc);
            popts.grid_n = pc_grid_n;
            ggbm::DensityGrid grid;
            const ggbm::DensityGrid* gp = nullptr;
            if (k.family != ggbm::KernelFamily::Standard) {
                grid = ggbm::density_grid(k, pc_T, pc_grid_n);
                gp = &grid;
            }
            std::vector<double> prices(strikes.size());
            for (std::size_t i = 0; i < strikes.size(); ++i)
                prices[i] = pc_kind == "put"
                                ? ggbm::gbs_put(k, m, strikes[i], pc_T, popts, gp)
                                : ggbm::gbs_call(k, m, strikes[i], pc_T, popts, gp);
            if (pc_format == "json") {
                json j;
                j["kernel"] = ggbm::to_string(k);
                j["spot"] = m.x0;
                j["rate"] = m.r;
                j["mu"] = m.mu;
                j["sigma"] = m.sigma;
                j["maturity"] = pc_T;
                j["kind"] = pc_kind;
                j["mode"] = pc_mode;
                j["discount"] = pc_disc;
                json rows = json::array();
                for (std::size_t i = 0; i < strikes.size(); ++i)
                    rows.push_back({{"strike", strikes[i]}, {"price", prices[i]}});
                j["results"] = rows;
                write_text(pc_out, j.dump(2) + "\n");
            } else {
                std::string csv = "strike,maturity,kind,price\n";
                for (std::size_t i = 0; i < strikes.size(); ++i)
                    csv += num(strikes[i]) + "," + num(pc_T) + "," + pc_kind + "," +
                           num(prices[i]) + "\n";
                write_text(pc_out, csv);
            }
            return 0;
        }

        if (*cc) {
            ggbm::OptionChain chain = ggbm::load_chain_csv(cc_chain);
            std::vector<double> alphas = parse_range(cc_alpha_grid, "--alpha-grid");
            ggbm::CalibrationOptions copts;
            copts.mode = parse_mode(cc_mode);
            copts.discounting = parse_discounting(cc_disc);
            copts.include_puts = cc_puts;
            copts.objective = cc_objective == "relative" ? ggbm::Objective::Relative
                              : cc_objective == "vega"   ? ggbm::Objective::Vega
                                                         : ggbm::Objective::Price;
            copts.sigma_lo = cc_sigma_lo;
            copts.sigma_hi = cc_sigma_hi;
            copts.sigma_tol = cc_sigma_tol;
            copts.grid_n = cc_grid_n;
            copts.threads = effective_threads(cc_threads);
            copts.tau = cc_tau;
            copts.w1 = cc_w1;
            copts.alpha2 = cc_alpha2;
            copts.family = cc_family == "tempered" ? ggbm::KernelFamily::Tempered
                           : cc_family == "mix-gs" ? ggbm::KernelFamily::MixStandardSub
                           : cc_family == "mix-ss" ? ggbm::KernelFamily::MixSubSub
                                                   : ggbm::KernelFamily::Subdiffusive;
            ggbm::CalibrationResult res = ggbm::mse_vs_alpha(chain, alphas, copts);
            json j;
            j["family"] = cc_family;
            j["kernel"] = ggbm::to_string(res.kernel);
            j["alpha_hat"] = res.alpha_grid[res.best_index];
            j["sigma_hat"] = res.sigma_hat;
            j["mse"] = res.mse;
            j["objective"] = cc_objective;
            j["include_puts"] = cc_puts;
            j["mode"] = cc_mode;
            j["discount"] = cc_disc;
            j["best_index"] = res.best_index;
            j["alpha_grid"] = res.alpha_grid;
            j["mse_curve"] = res.mse_curve;
            j["sigma_curve"] = res.sigma_curve;
            j["per_record_abs_error"] = res.per_record_abs_error;
            j["chain"] = {{"path", cc_chain},
                          {"quote_date", chain.quote_date},
                          {"spot", chain.spot},
                          {"rate", chain.rate},
                          {"records", chain.records.size()}};
            write_text(cc_out, j.dump(2) + "\n");
            if (!cc_curve_out.empty()) {
                std::string csv = "alpha,mse,sigma\n";
                for (std::size_t i = 0; i < res.alpha_grid.size(); ++i)
                    csv += num(res.alpha_grid[i]) + "," + num(res.mse_curve[i]) +
                           "," + num(res.sigma_curve[i]) + "\n";
                write_text(cc_curve_out, csv);
            }
            return 0;
        }

        if (*sc) {
            ggbm::Kernel k = ggbm::parse_kernel(sc_kernel);
            ggbm::MarketParams m;
            m.x0 = sc_spot;
            m.mu = sc_mu;
            m.sigma = sc_sigma;
            m.require_valid();
            std::vector<double> times = parse_range(sc_grid, "--grid");
            if (!(times.front() > 0.0))
                throw ggbm::domain_error("cli: --grid times must be > 0");
            ggbm::SimOptions sopts;
            sopts.threads = effective_threads(sc_threads);
            sopts.grid_n = sc_grid_n;
            sopts.du_factor = sc_du_factor;
            ggbm::PathEnsemble ens =
                ggbm::simulate_paths(k, m, times, sc_paths, sc_seed, sopts);
            ggbm::EnsembleStats st = ggbm::ensemble_stats(ens);
            if (sc_format == "json") {
                json j;
                j["kernel"] = ggbm::to_string(k);
                j["spot"] = m.x0;
                j["mu"] = m.mu;
                j["sigma"] = m.sigma;
                j["paths"] = sc_paths;
                j["seed"] = sc_seed;
                j["t"] = st.times;
                j["mean"] = st.mean;
                j["mean_se"] = st.mean_se;
                j["msd"] = st.msd;
                j["msd_se"] = st.msd_se;
                j["log_mean"] = st.log_mean;
                j["log_mean_se"] = st.log_mean_se;
                j["log_variance"] = st.log_var;
                j["log_variance_se"] = st.log_var_se;
                write_text(sc_out, j.dump(2) + "\n");
            } else {
                std::string csv =
                    "t,mean,mean_se,msd,msd_se,log_mean,log_mean_se,"
                    "log_variance,log_variance_se\n";
                for (std::size_t i = 0; i < st.times.size(); ++i)
                    csv += num(st.times[i]) + "," + num(st.mean[i]) + "," +
                           num(st.mean_se[i]) + "," + num(st.msd[i]) + "," +
                           num(st.msd_se[i]) + "," + num(st.log_mean[i]) + "," +
                           num(st.log_mean_se[i]) + "," + num(st.log_var[i]) +
                           "," + num(st.log_var_se[i]) + "\n";
                write_text(sc_out, csv);
            }
            if (!sc_paths_out.empty()) {
                std::string csv = "path,t,x\n";
                for (std::size_t p = 0; p < ens.n_paths; ++p)
                    for (std::size_t i = 0; i < ens.time_grid.size(); ++i)
                        csv += std::to_string(p) + "," + num(ens.time_grid[i]) +
                               "," + num(ens.at(p, i)) + "\n";
                write_text(sc_paths_out, csv);
            }
            return 0;
        }

        if (*dc) {
            ggbm::Kernel k = ggbm::parse_kernel(dc_kernel);
            std::vector<double> absc, vals;
            if (dc_which == "density") {
                ggbm::DensityGrid grid = ggbm::density_grid(k, dc_t, dc_grid_n);
                if (grid.degenerate)
                    throw ggbm::degenerate_density(
                        "cli: the standard kernel's operational-time law is the "
                        "point mass delta(u - t); there is no density to emit "
                        "(atom at u = " + num(grid.atom) + ")");
                absc = grid.u;
                vals = grid.h;
            } else {
                if (!dc_sigma_opt->count())
                    throw ggbm::domain_error(
                        "cli: pdf --which price requires --sigma");
                ggbm::MarketParams m;
                m.x0 = dc_spot;
                m.mu = dc_mu;
                m.sigma = dc_sigma;
                m.require_valid();
                std::vector<double> xs =
                    dc_x.empty()
                        ? parse_range(num(0.2 * dc_spot) + ":" +
                                          num(3.0 * dc_spot) + ":201",
                                      "--x")
                        : parse_range(dc_x, "--x");
                for (double x : xs)
                    if (!(x > 0.0))
                        throw ggbm::domain_error("cli: --x abscissas must be > 0");
                ggbm::PricingOptions popts;
                popts.grid_n = dc_grid_n;
                popts.inversion.nodes = dc_nodes;
                popts.inversion.scale = dc_scale;
                ggbm::PdfRoute route = dc_route == "quadrature"
                                           ? ggbm::PdfRoute::Quadrature
                                           : ggbm::PdfRoute::Direct;
                ggbm::PricePdfSlice slice =
                    ggbm::price_pdf_slice(k, m, xs, dc_t, route, popts);
                absc = slice.x;
                vals = slice.p;
            }
            if (dc_format == "json") {
                json j;
                j["kernel"] = ggbm::to_string(k);
                j["which"] = dc_which;
                j["t"] = dc_t;
                j["abscissa"] = absc;
                j["value"] = vals;
                write_text(dc_out, j.dump(2) + "\n");
            } else {
                std::string csv = "abscissa,value\n";
                for (std::size_t i = 0; i < absc.size(); ++i)
                    csv += num(absc[i]) + "," + num(vals[i]) + "\n";
                write_text(dc_out, csv);
            }
            return 0;
        }

        if (*mc) {
            ggbm::Kernel k = ggbm::parse_kernel(mc_kernel);
            ggbm::MarketParams m;
            m.x0 = mc_spot;
            m.mu = mc_mu;
            m.sigma = mc_sigma;
            m.require_valid();
            std::vector<double> ts = parse_range(mc_grid, "--grid");
            if (!(ts.front() >= 0.0))
                throw ggbm::domain_error("cli: --grid times must be >= 0");
            double dt = mc_dt;
            if (dt <= 0.0) {
                if (ts.size() < 2)
                    throw ggbm::domain_error(
                        "cli: --dt is required when the grid has a single point");
                dt = ts[1] - ts[0];
            }
            std::vector<double> mean(ts.size()), msd(ts.size()), lmean(ts.size());
            std::vector<double> lvar(ts.size()), plr(ts.size());
            for (std::size_t i = 0; i < ts.size(); ++i) {
                mean[i] = ggbm::analytic_mean(k, m, ts[i]);
                msd[i] = ggbm::analytic_msd(k, m, ts[i]);
                lmean[i] = ggbm::log_mean(k, m, ts[i]);
                lvar[i] = ggbm::log_variance(k, m, ts[i]);
                plr[i] = ggbm::periodic_log_return(k, m, ts[i], dt);
            }
            if (mc_format == "json") {
                json j;
                j["kernel"] = ggbm::to_string(k);
                j["spot"] = m.x0;
                j["mu"] = m.mu;
                j["sigma"] = m.sigma;
                j["dt"] = dt;
                j["t"] = ts;
                j["mean"] = mean;
                j["msd"] = msd;
                j["log_mean"] = lmean;
                j["log_variance"] = lvar;
                j["periodic_log_return"] = plr;
                write_text(mc_out, j.dump(2) + "\n");
            } else {
                std::string csv =
                    "t,mean,msd,log_mean,log_variance,periodic_log_return\n";
                for (std::size_t i = 0; i < ts.size(); ++i)
                    csv += num(ts[i]) + "," + num(mean[i]) + "," + num(msd[i]) +
                           "," + num(lmean[i]) + "," + num(lvar[i]) + "," +
                           num(plr[i]) + "\n";
                write_text(mc_out, csv);
            }
            return 0;
        }

        std::cerr << "ggbm: usage: a subcommand is required (see --help)\n";
        return 2;
    } catch (const ggbm::io_error& e) {
        std::cerr << "ggbm: io error: " << one_line(e.what()) << "\n";
        return 4;
    } catch (const ggbm::domain_error& e) {
        std::cerr << "ggbm: usage: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const ggbm::numeric_error& e) {
        std::cerr << "ggbm: numeric error: " << one_line(e.what()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "ggbm: internal error: " << one_line(e.what()) << "\n";
        return 3;
    }
}
