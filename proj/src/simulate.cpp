#include "ggbm/simulate.hpp"

#include "ggbm/errors.hpp"
#include "ggbm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ggbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw domain_error("simulate: stable increments require alpha in (0, 1)");
}

// First-passage state of a subdiffusive subordinator walk: T is the running
// subordinator value at operational time u; steps of size du advance u.
struct Walker {
    double u = 0.0;
    double T = 0.0;
    double last_pos = 0.0; // passage position assigned in the last crossing step
};

// Advance the walker to the first passage of level t and return the passage
// location in u. The step size shrinks with the remaining gap BEFORE each
// increment is drawn — du = clamp((gap/8)^alpha, du_min, du0), so the typical
// subordinator move stays near gap/8 — and every draw is kept. Shrinking on
// the observed state only preserves the path's law exactly; a scheme that
// discards an overshooting increment and redraws at finer du gives every
// interval repeated chances to stay below t and biases S(t) upward (selection
// on the rejected future). Within the crossing step the passage point of a
// single jump over the gap is uniform by the Poisson property, so the
// position is drawn uniformly; multi-jump corrections are O(du^{1/alpha}/gap)
// relative to the step. A level at or below the current T was passed inside
// an earlier step — a trapping plateau — and reuses that step's position.
double walk_to_passage(Walker& w, double alpha, double t, double du0, double du_min,
                       Rng& rng) {
    if (w.T > t) return w.last_pos;
    for (;;) {
        double gap = t - w.T;
        double du = std::min(std::pow(gap / 8.0, alpha), du0);
        du = std::max(du, du_min);
        double inc = sample_stable_increment(alpha, du, rng);
        bool crossed = w.T + inc > t;
        if (crossed) w.last_pos = w.u + rng.uniform01() * du;
        w.u += du;
        w.T += inc;
        if (crossed) return w.last_pos;
    }
}

} // namespace

double sample_stable_increment(double alpha, double du, Rng& rng) {
    check_alpha(alpha);
    if (!(du > 0.0)) throw domain_error("simulate: step du must be > 0");
    // Kanter construction, evaluated in logs:
    //   X = (a(theta)/W)^{(1-alpha)/alpha},
    //   ln a = [alpha ln sin(alpha th) + (1-alpha) ln sin((1-alpha) th)
    //           - ln sin th] / (1-alpha) ... rearranged below
    double theta = kPi * rng.uniform01();
    double w = rng.exponential();
    double ln_a = (alpha / (1.0 - alpha)) * std::log(std::sin(alpha * theta)) +
                  std::log(std::sin((1.0 - alpha) * theta)) -
                  (1.0 / (1.0 - alpha)) * std::log(std::sin(theta));
    double ln_x = ((1.0 - alpha) / alpha) * (ln_a - std::log(w));
    return std::exp(std::log(du) / alpha + ln_x);
}

SubordinatorPath sample_subordinator_path(double alpha, double du,
                                          std::size_t n_steps, Rng& rng) {
    check_alpha(alpha);
    if (!(du > 0.0)) throw domain_error("simulate: step du must be > 0");
    SubordinatorPath path;
    path.du = du;
    path.T.resize(n_steps + 1);
    path.T[0] = 0.0;
    for (std::size_t i = 1; i <= n_steps; ++i)
        path.T[i] = path.T[i - 1] + sample_stable_increment(alpha, du, rng);
    return path;
}

double inverse_subordinator(const Kernel& k, double t, Rng& rng) {
    k.require_valid();
    if (!(t > 0.0)) throw domain_error("simulate: passage level t must be > 0");
    switch (k.family) {
    case KernelFamily::Standard:
        return t;
    case KernelFamily::Subdiffusive: {
        double du0 = std::pow(t / 500.0, k.alpha);
        Walker w;
        return walk_to_passage(w, k.alpha, t, du0, du0 / 64.0, rng);
    }
    default:
        throw domain_error(
            "simulate: no exact path construction for this kernel; draw through "
            "a DensityGrid (inverse-CDF route) instead");
    }
}

double inverse_subordinator(const DensityGrid& grid, Rng& rng) {
    return grid.quantile(rng.uniform01());
}

PathEnsemble simulate_paths(const Kernel& k, const MarketParams& m,
                            const std::vector<double>& times, std::size_t n_paths,
                            std::uint64_t seed, const SimOptions& opts) {
    k.require_valid();
    m.require_valid();
    if (times.empty()) throw domain_error("simulate: empty time grid");
    if (!(times.front() > 0.0))
        throw domain_error("simulate: time grid must be strictly positive");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw domain_error("simulate: time grid must be strictly ascending");
    if (n_paths == 0) throw domain_error("simulate: need at least one path");
    if (!(opts.du_factor > 0.0))
        throw domain_error("simulate: du_factor must be > 0");

    PathEnsemble ens;
    ens.time_grid.reserve(times.size() + 1);
    ens.time_grid.push_back(0.0);
    ens.time_grid.insert(ens.time_grid.end(), times.begin(), times.end());
    ens.n_paths = n_paths;
    ens.seed = seed;
    ens.kernel = k;
    ens.market = m;
    const std::size_t n_times = ens.time_grid.size();
    ens.paths.assign(n_paths * n_times, 0.0);

    // Tempered/mixed kernels draw S(t_i) by comonotone inverse-CDF coupling;
    // the grids are built once, serially, and shared read-only by all workers.
    const bool grid_route = k.family == KernelFamily::Tempered ||
                            k.family == KernelFamily::MixStandardSub ||
                            k.family == KernelFamily::MixSubSub;
    std::vector<DensityGrid> grids;
    if (grid_route) {
        grids.reserve(times.size());
        for (double t : times) grids.push_back(density_grid(k, t, opts.grid_n));
    }

    const double mubar = m.mubar();
    const double sigma = m.sigma;
    const double t_max = times.back();
    const double du0 = k.family == KernelFamily::Subdiffusive
                           ? std::pow(t_max / opts.du_factor, k.alpha)
                           : 0.0;

    int threads = resolve_threads(opts.threads);
    parallel_for(static_cast<std::int64_t>(n_paths), threads,
                 [&](std::int64_t begin, std::int64_t end) {
        std::vector<double> S(times.size());
        for (std::int64_t p = begin; p < end; ++p) {
            Rng rng = Rng::for_path(seed, static_cast<std::uint64_t>(p));
            // subordinator layer first: fixed draw order per path
            switch (k.family) {
            case KernelFamily::Standard:
                for (std::size_t i = 0; i < times.size(); ++i) S[i] = times[i];
                break;
            case KernelFamily::Subdiffusive: {
                Walker w;
                for (std::size_t i = 0; i < times.size(); ++i)
                    S[i] = walk_to_passage(w, k.alpha, times[i], du0, du0 / 64.0, rng);
                break;
            }
            default: {
                double uu = rng.uniform01();
                double prev = 0.0;
                for (std::size_t i = 0; i < times.size(); ++i) {
                    double q = grids[i].quantile(uu);
                    prev = std::max(prev, q); // enforce monotonicity across grids
                    S[i] = prev;
                }
                break;
            }
            }
            // Brownian layer over Delta S; a zero step leaves x unchanged
            // exactly and consumes no normal draw (trapping plateaus are
            // bit-exact flats).
            double* row = &ens.paths[static_cast<std::size_t>(p) * n_times];
            row[0] = m.x0;
            double x = m.x0;
            double s_prev = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i) {
                double ds = S[i] - s_prev;
                if (ds > 0.0) {
                    double z = rng.normal();
                    x *= std::exp(mubar * ds + sigma * std::sqrt(ds) * z);
                    s_prev = S[i];
                }
                row[i + 1] = x;
            }
        }
    });
    return ens;
}

EnsembleStats ensemble_stats(const PathEnsemble& ens) {
    const std::size_t n = ens.n_paths;
    const std::size_t n_times = ens.time_grid.size();
    if (n == 0 || n_times == 0)
        throw domain_error("simulate: statistics of an empty ensemble");
    EnsembleStats st;
    st.times = ens.time_grid;
    auto resize_all = [&](auto&... v) { (v.resize(n_times), ...); };
    resize_all(st.mean, st.mean_se, st.msd, st.msd_se, st.log_mean, st.log_mean_se,
               st.log_var, st.log_var_se);

    std::vector<double> buf(n), dev(n);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < n_times; ++j) {
        auto center_se = [&](const std::vector<double>& v, double center) {
            if (n < 2) return 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                double d = v[p] - center;
                dev[p] = d * d;
            }
            double var = pairwise_sum(dev.data(), n) / (dn - 1.0);
            return std::sqrt(std::max(var, 0.0) / dn);
        };
        for (std::size_t p = 0; p < n; ++p) buf[p] = ens.at(p, j);
        double mean = pairwise_sum(buf.data(), n) / dn;
        st.mean[j] = mean;
        st.mean_se[j] = center_se(buf, mean);

        for (std::size_t p = 0; p < n; ++p) buf[p] = ens.at(p, j) * ens.at(p, j);
        double msd = pairwise_sum(buf.data(), n) / dn;
        st.msd[j] = msd;
        st.msd_se[j] = center_se(buf, msd);

        for (std::size_t p = 0; p < n; ++p) buf[p] = std::log(ens.at(p, j));
        double lmean = pairwise_sum(buf.data(), n) / dn;
        st.log_mean[j] = lmean;
        st.log_mean_se[j] = center_se(buf, lmean);

        // central moments of the logs for the variance and its s.e.
        for (std::size_t p = 0; p < n; ++p) {
            double d = buf[p] - lmean;
            dev[p] = d * d;
        }
        double sum2 = pairwise_sum(dev.data(), n);
        double m2 = sum2 / dn;
        st.log_var[j] = n < 2 ? 0.0 : sum2 / (dn - 1.0);
        for (std::size_t p = 0; p < n; ++p) dev[p] = dev[p] * dev[p];
        double m4 = pairwise_sum(dev.data(), n) / dn;
        st.log_var_se[j] = n < 2 ? 0.0 : std::sqrt(std::max(m4 - m2 * m2, 0.0) / dn);
    }
    return st;
}

Histogram log_return_histogram(const PathEnsemble& ens, double t, double dt,
                               int n_bins) {
    if (n_bins < 1) throw domain_error("simulate: histogram needs at least one bin");
    if (!(dt > 0.0)) throw domain_error("simulate: histogram period dt must be > 0");
    auto locate = [&ens](double value) -> std::size_t {
        for (std::size_t j = 0; j < ens.time_grid.size(); ++j)
            if (std::abs(ens.time_grid[j] - value) <=
                1e-9 * std::max(1.0, std::abs(value)))
                return j;
        throw domain_error("simulate: histogram time not on the ensemble grid");
    };
    std::size_t j1 = locate(t), j2 = locate(t + dt);
    const std::size_t n = ens.n_paths;
    std::vector<double> r(n);
    for (std::size_t p = 0; p < n; ++p)
        r[p] = std::log(ens.at(p, j2) / ens.at(p, j1));

    double lo = *std::min_element(r.begin(), r.end());
    double hi = *std::max_element(r.begin(), r.end());
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.t = t;
    h.dt = dt;
    h.count = n;
    h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n_bins;
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    const double w = (hi - lo) / n_bins;
    for (double v : r) {
        int idx = static_cast<int>((v - lo) / w);
        if (idx < 0) idx = 0;
        if (idx >= n_bins) idx = n_bins - 1;
        ++counts[static_cast<std::size_t>(idx)];
    }
    h.density.resize(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i)
        h.density[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) /
            (static_cast<double>(n) * w);

    // excess kurtosis of the pooled returns
    double mean = pairwise_sum(r.data(), n) / static_cast<double>(n);
    std::vector<double> d2(n);
    for (std::size_t p = 0; p < n; ++p) {
        double d = r[p] - mean;
        d2[p] = d * d;
    }
    double m2 = pairwise_sum(d2.data(), n) / static_cast<double>(n);
    for (std::size_t p = 0; p < n; ++p) d2[p] = d2[p] * d2[p];
    double m4 = pairwise_sum(d2.data(), n) / static_cast<double>(n);
    h.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return h;
}

} // namespace ggbm
