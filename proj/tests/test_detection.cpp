#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covlab/detection.hpp"
#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/stats.hpp"
#include "covlab/tvlab.hpp"
#include "covlab/wishart.hpp"

using namespace covlab;

TEST_CASE("likelihood-ratio threshold") {
    CHECK(lr_log_det_threshold(1, 2) == doctest::Approx(std::log(2.0 / std::numbers::pi)).epsilon(1e-13));
    // With n = 1 the det is a chi-square; at the threshold both densities agree.
    const double a = std::exp(lr_log_det_threshold(1, 2));
    CHECK(log_density_from({1, 2}, std::log(a), a) ==
          doctest::Approx(log_density_from({1, 1}, std::log(a), a)).epsilon(1e-12));
}

TEST_CASE("deficient ensembles have the reduced Wishart law") {
    RngStream rng(61, 0);
    const Ensemble e = Ensemble::deficient_random(8, 2);
    RunningStats tr;
    for (int t = 0; t < 20000; ++t) tr.add(trace(gram(e.draw_batch(3, rng)).entries));
    CHECK(std::abs(tr.mean() - 18.0) < 5 * tr.standard_error());
    CHECK(e.label() == "deficient-random(k=2)");
    CHECK_THROWS_AS(Ensemble::deficient_random(4, 4), InvalidParams);
    CHECK_THROWS_AS(Ensemble::deficient_fixed(Vector{1, 1, 0}), NotUnit);
}

TEST_CASE("true section rank") {
    CHECK(true_section_rank(SymMatrix::identity(4)) == 2);
    CHECK(true_section_rank(projector_complement(std::vector<double>{0.6, 0.8, 0})) == 1);
    CHECK(true_section_rank(SymMatrix::diagonal(std::vector<double>{0, 0, 1})) == 0);
}

TEST_CASE("gram-based detectors ignore rotations") {
    RngStream rng(62, 0);
    const std::size_t n = 3, d = 6;
    for (const auto& name : detector_names()) {
        if (name == "coordinate") continue;
        const Detector f = make_detector(name, n, d, 5);
        for (int t = 0; t < 40; ++t) {
            const SampleBatch b = standard_batch(d, n, rng);
            const SampleBatch r = rotate_batch(haar_rotation(d, rng), b);
            CHECK_MESSAGE(f(b) == f(r), name);
        }
    }
}

TEST_CASE("coordinate detector is not rotation invariant but its symmetrization is") {
    RngStream rng(63, 0);
    const Detector f = coordinate_detector();
    const Detector g = symmetrize_detector(f, 5, 1, RngStream(1, 1));
    bool differs = false;
    for (int t = 0; t < 50; ++t) {
        const SampleBatch b = standard_batch(5, 2, rng);
        const SampleBatch r = rotate_batch(haar_rotation(5, rng), b);
        differs = differs || f(b) != f(r);
        CHECK(g(b) == g(r));
    }
    CHECK(differs);
}

TEST_CASE("canonical frame reproduces the gram matrix") {
    RngStream rng(64, 0);
    const SampleBatch b = standard_batch(5, 3, rng);
    const Matrix l = canonical_frame(b);
    CHECK(max_abs(gram_of_rows(l).matrix() - gram_of_rows(b.vectors).matrix()) < 1e-12);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) CHECK(l(i, j) == 0.0);
}

TEST_CASE("unknown detector names are reported") {
    try {
        make_detector("nosuch", 1, 3, 0);
        FAIL("expected UnknownDetector");
    } catch (const UnknownDetector& e) {
        CHECK(std::string(e.what()).find("lr") != std::string::npos);
        CHECK(std::string(e.what()).find("bayes3") != std::string::npos);
    }
}

TEST_CASE("two-way game: constant guess gets exactly one half") {
    const GameReport r = run_two_way_game(2, 6, constant_detector(2), 10000, RngStream(65, 0));
    CHECK(r.joint_success == 0.5);
    CHECK(r.ensembles[0].success == 1.0);
    CHECK(r.ensembles[1].success == 0.0);
    REQUIRE(r.ceiling);
    CHECK(*r.ceiling == doctest::Approx(0.5 * (1 + tv_closed_form_bound(2, 6))));
    CHECK_THROWS_AS(run_two_way_game(2, 6, constant_detector(2), 100, RngStream(65, 0)), InvalidParams);
}

TEST_CASE("two-way game results do not depend on worker count") {
    const Detector lr = lr_detector(2, 8);
    const GameReport a = run_two_way_game(2, 8, lr, 12000, RngStream(66, 0), {1});
    const GameReport b = run_two_way_game(2, 8, lr, 12000, RngStream(66, 0), {4});
    CHECK(a.joint_success == b.joint_success);
    CHECK(a.joint_standard_error == b.joint_standard_error);
}

TEST_CASE("lr detector at n=1, d=2 matches the exact TV ceiling") {
    const double tv = std::erf(std::sqrt(1 / std::numbers::pi)) - 1 + std::exp(-1 / std::numbers::pi);
    const GameReport r = run_two_way_game(1, 2, lr_detector(1, 2), 100000, RngStream(67, 0));
    CHECK(std::abs(r.joint_success - 0.5 * (1 + tv)) < 3 * r.joint_standard_error);
}

TEST_CASE("fixed theta games") {
    Vector perp(5, 0.0);
    perp[3] = 1.0;
    CHECK_THROWS_AS(run_fixed_theta_game(2, 5, perp, lr_detector(2, 5), 10000, RngStream(68, 0)), ThetaInEPerp);
    const ThetaScan s = scan_fixed_theta(2, 10, lr_detector(2, 10), 3, 10000, RngStream(68, 0));
    CHECK(s.reports.size() == 3);
    REQUIRE(s.first_failure);
    CHECK(*s.first_failure == 0);
}

TEST_CASE("three-way game labels by ensemble") {
    const GameReport r = run_three_way_game(1, 4, 10000, RngStream(69, 0));
    REQUIRE(r.ensembles.size() == 3);
    CHECK(r.ensembles[2].correct_label == 0);
    CHECK(r.joint_success > 1.0 / 3);
    CHECK(r.joint_success < 1.0);
    const GameReport c = run_three_way_game(1, 4, constant_detector(1), 10000, RngStream(69, 0));
    CHECK(c.joint_success == doctest::Approx(1.0 / 3).epsilon(1e-15));
}
