#pragma once

// Total variation between W_n(Id, d-1) and W_n(Id, d): the exact integral
// representation estimated by Monte Carlo, the Cauchy-Schwarz relaxation
// sd(det^{1/2}) / E det^{1/2}, the Lyapunov relaxation sd(det) / E det, and
// the closed form of the latter.

#include <cstddef>
#include <span>

#include "covlab/parallel.hpp"
#include "covlab/rng.hpp"

namespace covlab {

inline constexpr std::size_t kMinTvTrials = 10000;
/// One-sided slack, in standard errors, on every stochastic inequality.
inline constexpr double kChainSlackSe = 3.0;

/// (1/2) sqrt(d(d+1) / ((d-n)(d-n+1)) - 1). Requires 1 ≤ n < d.
double tv_closed_form_bound(std::size_t n, std::size_t d);

/// (1/2) sqrt(Var det) / E det under W_n(Id, d-1), from det_moments.
double tv_moment_ratio_bound(std::size_t n, std::size_t d);

/// (1/2) sd(det^{1/2}) / E det^{1/2} under W_n(Id, d-1), using
/// E det^{1/2} = Z(n,d) / Z(n,d-1) and E det from det_moments.
double sqrt_moment_ratio_exact(std::size_t n, std::size_t d);

struct TvEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Mean of (1/2)|1 - det(G)^{1/2} Z(n,d-1)/Z(n,d)| over G ~ W_n(Id, d-1).
TvEstimate tv_exact_mc(std::size_t n, std::size_t d, std::size_t trials, const RngStream& rng,
                       ExecPolicy exec = {});

/// The same distance estimated under W_n(Id, d) with the reciprocal ratio.
TvEstimate tv_exact_mc_swapped(std::size_t n, std::size_t d, std::size_t trials,
                               const RngStream& rng, ExecPolicy exec = {});

struct ChainCheck {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t samples = 0;
    double tv_mc = 0.0;
    double tv_se = 0.0;
    double sqrt_ratio_mc = 0.0;
    double sqrt_ratio_se = 0.0;
    double link1_se = 0.0;  ///< SE of tv_mc - sqrt_ratio_mc (same samples)
    double sqrt_ratio_exact = 0.0;
    double moment_ratio = 0.0;
    double closed_form = 0.0;
    bool link1_ok = false;  ///< tv ≤ sqrt-ratio within kChainSlackSe
    bool link2_ok = false;  ///< sqrt-ratio ≤ moment ratio (exact, and MC within slack)

    bool ordered() const { return link1_ok && link2_ok; }
};

ChainCheck lyapunov_chain_check(std::size_t n, std::size_t d, std::size_t trials,
                                const RngStream& rng, ExecPolicy exec = {});

struct ChainTriple {
    double tv = 0.0;
    double sqrt_ratio = 0.0;
    double moment_ratio = 0.0;
};

/// The chain evaluated on the empirical law of the given determinant values
/// (normalized by the sample mean of det^{1/2}). Both inequalities hold
/// exactly for any sample. Throws InvalidParams on empty or negative input.
ChainTriple empirical_chain(std::span<const double> dets);

struct TvReport {
    std::size_t n = 0;
    std::size_t d = 0;
    double closed_form_bound = 0.0;
    double moment_ratio_bound = 0.0;
    double sqrt_moment_ratio_bound = 0.0;
    double sqrt_moment_ratio_se = 0.0;
    double sqrt_moment_ratio_exact = 0.0;
    double mc_estimate = 0.0;
    double mc_standard_error = 0.0;
    std::size_t samples_used = 0;
    bool chain_ordered = false;
};

TvReport tv_report(std::size_t n, std::size_t d, std::size_t trials, const RngStream& rng,
                   ExecPolicy exec = {});

}  // namespace covlab
