#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/stats.hpp"
#include "covlab/wishart.hpp"
#include "oracles.hpp"

using namespace covlab;

TEST_CASE("normalizer integrates the 2x2 density to one") {
    for (int p : {4, 5, 7}) {
        const double mass = oracle::wishart2_unnormalized_mass(p);
        CHECK(log_normalizer({2, static_cast<std::size_t>(p)}) == doctest::Approx(std::log(mass)).epsilon(1e-6));
    }
}

TEST_CASE("normalizer term by term") {
    const double want = 3 * std::log(2.0) + 0.5 * std::log(std::numbers::pi) + std::lgamma(1.5) + std::lgamma(1.0);
    CHECK(log_normalizer({2, 3}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("n = 1 reduces to the chi-square density") {
    for (std::size_t p : {1u, 2u, 5u, 10u}) {
        for (double x : {0.3, 1.0, 4.5}) {
            const double k = static_cast<double>(p) / 2;
            const double chi2 = (k - 1) * std::log(x) - x / 2 - k * std::log(2.0) - std::lgamma(k);
            GramMatrix g{SymMatrix{{x}}};
            CHECK(log_density({1, p}, g) == doctest::Approx(chi2).epsilon(1e-12));
        }
    }
}

TEST_CASE("log density from precomputed summaries") {
    const GramMatrix g{SymMatrix{{3, 1}, {1, 2}}};
    const WishartParams w{2, 5};
    CHECK(log_density(w, g) == doctest::Approx(log_density_from(w, std::log(5.0), 5.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_density(w, GramMatrix{SymMatrix{{1, 1}, {1, 1}}}), NotPd);
    CHECK_THROWS_AS(log_density({3, 5}, g), DimensionMismatch);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((WishartParams{3, 2}).validate(), InvalidParams);
    CHECK_THROWS_AS((WishartParams{0, 2}).validate(), InvalidParams);
    CHECK_NOTHROW((WishartParams{2, 2}).validate());
    CHECK_THROWS_AS(det_moments({4, 3}), InvalidParams);
}

TEST_CASE("determinant moments match the product formulas") {
    for (int n = 1; n <= 6; ++n)
        for (int p = n; p <= 40; p += 3) {
            const DetMoments m = det_moments({static_cast<std::size_t>(n), static_cast<std::size_t>(p)});
            CHECK(m.mean == doctest::Approx(oracle::det_mean(n, p)).epsilon(1e-12));
            CHECK(m.variance == doctest::Approx(oracle::det_variance(n, p)).epsilon(1e-10));
        }
    const DetMoments chi = det_moments({1, 7});
    CHECK(chi.mean == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(chi.variance == doctest::Approx(14.0).epsilon(1e-13));
}

TEST_CASE("samples have the right first moments") {
    RngStream rng(41, 0);
    const WishartParams w{3, 6};
    RunningStats tr, det, off;
    for (int t = 0; t < 100000; ++t) {
        const GramMatrix g = wishart_sample(w, rng);
        tr.add(trace(g.entries));
        det.add(determinant(g.entries.matrix()));
        off.add(g.entries(0, 2));
    }
    CHECK(std::abs(tr.mean() - 18.0) < 5 * tr.standard_error());
    CHECK(std::abs(det.mean() - oracle::det_mean(3, 6)) < 5 * det.standard_error());
    CHECK(std::abs(off.mean()) < 5 * off.standard_error());
    CHECK(std::abs(off.variance() - 6.0) < 0.2);
}

TEST_CASE("gram of a batch") {
    RngStream rng(42, 0);
    const SampleBatch b = standard_batch(4, 2, rng);
    const GramMatrix g = gram(b);
    CHECK(g.n() == 2);
    CHECK(g.entries(0, 1) == doctest::Approx(dot(b.sample(0), b.sample(1))).epsilon(1e-15));
}
