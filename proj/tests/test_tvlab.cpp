#include <doctest.h>

#include <cmath>
#include <vector>

#include "covlab/errors.hpp"
#include "covlab/tvlab.hpp"
#include "covlab/wishart.hpp"
#include "oracles.hpp"

using namespace covlab;

TEST_CASE("closed-form bound spot values") {
    CHECK(tv_closed_form_bound(1, 3) == 0.5);
    CHECK(tv_closed_form_bound(9, 30) == doctest::Approx(0.5032).epsilon(2e-4));
    CHECK(tv_closed_form_bound(1, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(tv_closed_form_bound(3, 3), InvalidParams);
    CHECK_THROWS_AS(tv_closed_form_bound(0, 3), InvalidParams);
}

TEST_CASE("moment ratio bound equals the closed form") {
    for (std::size_t d = 2; d <= 60; ++d)
        for (std::size_t n = 1; n < d; ++n) {
            CHECK(std::abs(tv_moment_ratio_bound(n, d) - tv_closed_form_bound(n, d)) < 1e-12);
            CHECK(std::abs(tv_closed_form_bound(n, d) - oracle::closed_form_bound(n, d)) < 1e-13);
        }
}

TEST_CASE("sqrt moment ratio is below the moment ratio") {
    for (std::size_t d = 2; d <= 40; ++d)
        for (std::size_t n = 1; n < d; ++n) CHECK(sqrt_moment_ratio_exact(n, d) <= tv_moment_ratio_bound(n, d));
    // n = 1: det^{1/2} is a chi variable with d-1 degrees of freedom.
    const double k = 1.0;
    const double m = std::sqrt(2.0) * std::exp(std::lgamma((k + 1) / 2) - std::lgamma(k / 2));
    CHECK(sqrt_moment_ratio_exact(1, 2) == doctest::Approx(0.5 * std::sqrt(k - m * m) / m).epsilon(1e-12));
}

TEST_CASE("exact-TV Monte Carlo matches quadrature at n=1, d=2") {
    const double exact = oracle::tv_chi2_1_vs_2();
    const TvEstimate e = tv_exact_mc(1, 2, 200000, RngStream(51, 0));
    CHECK(e.samples == 200000);
    CHECK(std::abs(e.estimate - exact) < 3 * e.standard_error);
    const TvEstimate s = tv_exact_mc_swapped(1, 2, 200000, RngStream(52, 0));
    CHECK(std::abs(s.estimate - exact) < 3 * s.standard_error);
}

TEST_CASE("trial and parameter checks") {
    const RngStream rng(1, 0);
    CHECK_THROWS_AS(tv_exact_mc(1, 2, 100, rng), InvalidParams);
    CHECK_THROWS_AS(tv_exact_mc(2, 2, 20000, rng), InvalidParams);
    CHECK_THROWS_AS(empirical_chain(std::vector<double>{}), InvalidParams);
    CHECK_THROWS_AS(empirical_chain(std::vector<double>{1.0, -1.0}), InvalidParams);
}

TEST_CASE("chain check is ordered and worker independent") {
    for (auto [n, d] : {std::pair<std::size_t, std::size_t>{1, 3}, {2, 7}, {3, 30}}) {
        const ChainCheck a = lyapunov_chain_check(n, d, 40000, RngStream(53, n), {1});
        const ChainCheck b = lyapunov_chain_check(n, d, 40000, RngStream(53, n), {4});
        CHECK(a.ordered());
        CHECK(a.tv_mc == b.tv_mc);
        CHECK(a.sqrt_ratio_mc == b.sqrt_ratio_mc);
        CHECK(std::abs(a.sqrt_ratio_mc - a.sqrt_ratio_exact) < 5 * a.sqrt_ratio_se);
        CHECK(a.moment_ratio == doctest::Approx(a.closed_form).epsilon(1e-12));
    }
}

TEST_CASE("empirical chain holds for any sample") {
    RngStream rng(54, 0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> dets(5 + rep);
        for (double& v : dets) v = std::exp(2 * rng.normal());
        const ChainTriple c = empirical_chain(dets);
        CHECK(c.tv <= c.sqrt_ratio + 1e-15);
        CHECK(c.sqrt_ratio <= c.moment_ratio + 1e-15);
    }
}

TEST_CASE("report fields") {
    const TvReport r = tv_report(2, 7, 20000, RngStream(55, 0));
    CHECK(r.closed_form_bound == doctest::Approx(oracle::closed_form_bound(2, 7)));
    CHECK(r.samples_used == 20000);
    CHECK(r.chain_ordered);
    CHECK(r.mc_estimate <= r.closed_form_bound);
}
