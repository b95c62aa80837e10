#include "covlab/tvlab.hpp"

#include <cmath>
#include <string>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/stats.hpp"
#include "covlab/wishart.hpp"

namespace covlab {

namespace {

void check_pair(std::size_t n, std::size_t d) {
    if (n < 1 || n >= d)
        throw InvalidParams("requires 1 <= n < d (got n=" + std::to_string(n) +
                            ", d=" + std::to_string(d) + ")");
}

void check_trials(std::size_t trials) {
    if (trials < kMinTvTrials)
        throw InvalidParams("at least " + std::to_string(kMinTvTrials) + " trials required");
}

/// Features (h, x, x²) with x = det^{1/2} scaled so that E x = 1 under the
/// sampling law and h = (1/2)|1 - x|.
using ChainMoments = Comoments<3>;

ChainMoments sample_chain(WishartParams law, double log_scale, std::size_t trials,
                          const RngStream& rng, ExecPolicy exec) {
    return run_blocks<ChainMoments>(trials, rng, exec,
                                    [&](RngStream& stream, std::size_t count, ChainMoments& acc) {
                                        for (std::size_t t = 0; t < count; ++t) {
                                            const GramMatrix g = wishart_sample(law, stream);
                                            const double logdet = cholesky_logdet(g.entries).logdet;
                                            const double x = std::exp(0.5 * logdet + log_scale);
                                            acc.add({0.5 * std::abs(1.0 - x), x, x * x});
                                        }
                                    });
}

}  // namespace

double tv_closed_form_bound(std::size_t n, std::size_t d) {
    check_pair(n, d);
    const double dd = static_cast<double>(d);
    const double nn = static_cast<double>(n);
    const double ratio = dd * (dd + 1.0) / ((dd - nn) * (dd - nn + 1.0));
    return 0.5 * std::sqrt(ratio - 1.0);
}

double tv_moment_ratio_bound(std::size_t n, std::size_t d) {
    check_pair(n, d);
    const DetMoments m = det_moments({n, d - 1});
    return 0.5 * std::sqrt(m.variance) / m.mean;
}

double sqrt_moment_ratio_exact(std::size_t n, std::size_t d) {
    check_pair(n, d);
    const DetMoments m = det_moments({n, d - 1});
    const double log_mean_root = log_normalizer({n, d}) - log_normalizer({n, d - 1});
    // E det / (E det^{1/2})² - 1
    const double excess = std::expm1(std::log(m.mean) - 2.0 * log_mean_root);
    return 0.5 * std::sqrt(std::max(excess, 0.0));
}

TvEstimate tv_exact_mc(std::size_t n, std::size_t d, std::size_t trials, const RngStream& rng,
                       ExecPolicy exec) {
    check_pair(n, d);
    check_trials(trials);
    const double log_scale = log_normalizer({n, d - 1}) - log_normalizer({n, d});
    const ChainMoments m = sample_chain({n, d - 1}, log_scale, trials, rng, exec);
    return {m.mean(0), m.standard_error(0), m.count()};
}

TvEstimate tv_exact_mc_swapped(std::size_t n, std::size_t d, std::size_t trials,
                               const RngStream& rng, ExecPolicy exec) {
    check_pair(n, d);
    check_trials(trials);
    const double log_scale = log_normalizer({n, d}) - log_normalizer({n, d - 1});
    const WishartParams law{n, d};
    const RunningStats s = run_blocks<RunningStats>(
        trials, rng, exec, [&](RngStream& stream, std::size_t count, RunningStats& acc) {
            for (std::size_t t = 0; t < count; ++t) {
                const GramMatrix g = wishart_sample(law, stream);
                const double logdet = cholesky_logdet(g.entries).logdet;
                acc.add(0.5 * std::abs(1.0 - std::exp(-0.5 * logdet + log_scale)));
            }
        });
    return {s.mean(), s.standard_error(), s.count()};
}

ChainCheck lyapunov_chain_check(std::size_t n, std::size_t d, std::size_t trials,
                                const RngStream& rng, ExecPolicy exec) {
    check_pair(n, d);
    check_trials(trials);
    const double log_scale = log_normalizer({n, d - 1}) - log_normalizer({n, d});
    const ChainMoments m = sample_chain({n, d - 1}, log_scale, trials, rng, exec);

    ChainCheck c;
    c.n = n;
    c.d = d;
    c.samples = m.count();
    c.tv_mc = m.mean(0);
    c.tv_se = m.standard_error(0);

    // r = (1/2) sqrt(m2/m1² - 1) with delta-method standard errors.
    const double m1 = m.mean(1);
    const double m2 = m.mean(2);
    const double q = m2 / (m1 * m1) - 1.0;
    if (q > 0.0) {
        const double root = std::sqrt(q);
        c.sqrt_ratio_mc = 0.5 * root;
        const double dm1 = -0.5 * m2 / (m1 * m1 * m1 * root);
        const double dm2 = 0.25 / (m1 * m1 * root);
        c.sqrt_ratio_se = m.standard_error({0.0, dm1, dm2});
        c.link1_se = m.standard_error({1.0, -dm1, -dm2});
    } else {
        c.link1_se = c.tv_se;
    }

    c.sqrt_ratio_exact = sqrt_moment_ratio_exact(n, d);
    c.moment_ratio = tv_moment_ratio_bound(n, d);
    c.closed_form = tv_closed_form_bound(n, d);
    c.link1_ok = c.tv_mc <= c.sqrt_ratio_mc + kChainSlackSe * c.link1_se;
    c.link2_ok = c.sqrt_ratio_exact <= c.moment_ratio &&
                 c.sqrt_ratio_mc <= c.moment_ratio + kChainSlackSe * c.sqrt_ratio_se;
    return c;
}

ChainTriple empirical_chain(std::span<const double> dets) {
    if (dets.empty()) throw InvalidParams("empirical_chain needs at least one value");
    RunningStats root_stats;
    RunningStats det_stats;
    for (double v : dets) {
        if (!(v >= 0.0)) throw InvalidParams("determinant values must be non-negative");
        root_stats.add(std::sqrt(v));
        det_stats.add(v);
    }
    const double count = static_cast<double>(dets.size());
    const auto population_sd = [count](const RunningStats& s) {
        return std::sqrt(s.variance() * (count - 1.0) / count);
    };

    ChainTriple t;
    const double mean_root = root_stats.mean();
    if (mean_root > 0.0) {
        double tv = 0.0;
        for (double v : dets) tv += std::abs(1.0 - std::sqrt(v) / mean_root);
        t.tv = 0.5 * tv / count;
        t.sqrt_ratio = 0.5 * population_sd(root_stats) / mean_root;
        t.moment_ratio = 0.5 * population_sd(det_stats) / det_stats.mean();
    }
    return t;
}

TvReport tv_report(std::size_t n, std::size_t d, std::size_t trials, const RngStream& rng,
                   ExecPolicy exec) {
    const ChainCheck c = lyapunov_chain_check(n, d, trials, rng, exec);
    TvReport r;
    r.n = n;
    r.d = d;
    r.closed_form_bound = c.closed_form;
    r.moment_ratio_bound = c.moment_ratio;
    r.sqrt_moment_ratio_bound = c.sqrt_ratio_mc;
    r.sqrt_moment_ratio_se = c.sqrt_ratio_se;
    r.sqrt_moment_ratio_exact = c.sqrt_ratio_exact;
    r.mc_estimate = c.tv_mc;
    r.mc_standard_error = c.tv_se;
    r.samples_used = c.samples;
    r.chain_ordered = c.ordered();
    return r;
}

}  // namespace covlab
