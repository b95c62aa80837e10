#include <doctest.h>

#include <cmath>
#include <set>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/rng.hpp"
#include "covlab/sampler.hpp"
#include "covlab/stats.hpp"

using namespace covlab;

TEST_CASE("philox known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and independent of each other") {
    RngStream a(5, 3);
    RngStream b(5, 3);
    for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    const RngStream base(5, 0);
    for (std::uint64_t i = 0; i < 1000; ++i) firsts.insert(base.split(i).next_u64());
    CHECK(firsts.size() == 1000);

    CHECK_FALSE(RngStream::derive(1, 1, 0) == RngStream::derive(1, 2, 0));
    CHECK_FALSE(RngStream::derive(1, 1, 0) == RngStream::derive(2, 1, 0));
    CHECK(RngStream::derive(1, 1, 7) == RngStream::derive(1, 1, 7));
}

TEST_CASE("split does not depend on how far the parent advanced") {
    RngStream a(9, 0);
    const RngStream untouched(9, 0);
    for (int k = 0; k < 10; ++k) a.next_u64();
    CHECK(a.split(4).next_u64() == untouched.split(4).next_u64());
}

TEST_CASE("uniform and normal moments") {
    RngStream rng(21, 0);
    RunningStats u, z, z2;
    const int n = 400000;
    for (int k = 0; k < n; ++k) {
        const double x = rng.uniform();
        CHECK_UNARY(x >= 0.0 && x < 1.0);
        u.add(x);
        const double g = rng.normal();
        z.add(g);
        z2.add(g * g);
    }
    CHECK(std::abs(u.mean() - 0.5) < 5 * u.standard_error());
    CHECK(std::abs(u.variance() - 1.0 / 12) < 1e-3);
    CHECK(std::abs(z.mean()) < 5 * z.standard_error());
    CHECK(std::abs(z2.mean() - 1.0) < 5 * z2.standard_error());
}

TEST_CASE("haar rotations are special orthogonal and uniform") {
    RngStream rng(22, 0);
    const std::size_t d = 4;
    RunningStats q11;
    for (int t = 0; t < 20000; ++t) {
        const Matrix q = haar_rotation(d, rng);
        if (t < 50) {
            CHECK(max_abs(q.transposed() * q - Matrix::identity(d)) < 1e-12);
            CHECK(determinant(q) == doctest::Approx(1.0));
        }
        q11.add(q(0, 0) * q(0, 0));
    }
    CHECK(std::abs(q11.mean() - 1.0 / d) < 5 * q11.standard_error());
    CHECK_THROWS_AS(haar_rotation(1, rng), InvalidParams);
}

TEST_CASE("sphere draws and deficient projectors") {
    RngStream rng(23, 0);
    RunningStats first;
    for (int t = 0; t < 10000; ++t) {
        const Vector v = uniform_sphere(5, rng);
        CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-14));
        first.add(v[0] * v[0]);
    }
    CHECK(std::abs(first.mean() - 0.2) < 5 * first.standard_error());

    for (std::size_t k = 1; k <= 3; ++k) {
        const SymMatrix p = random_deficient_projector(6, k, rng);
        CHECK(max_abs(p.matrix() * p.matrix() - p.matrix()) < 1e-12);
        CHECK(numerical_rank(p) == 6 - k);
        CHECK(trace(p) == doctest::Approx(6.0 - k));
    }
    CHECK_THROWS_AS(random_frame(3, 4, rng), InvalidParams);
}

TEST_CASE("sample_batch reproduces its covariance") {
    RngStream rng(24, 0);
    const SymMatrix cov{{2, 0.5, 0}, {0.5, 1, -0.3}, {0, -0.3, 0.5}};
    const std::size_t n = 100000;
    const SampleBatch batch = sample_batch(cov, n, rng);
    CHECK(batch.count() == n);
    CHECK(batch.dim() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            RunningStats s;
            for (std::size_t t = 0; t < n; ++t) s.add(batch.sample(t)[i] * batch.sample(t)[j]);
            CHECK(std::abs(s.mean() - cov(i, j)) < 5 * s.standard_error());
        }
}

TEST_CASE("rotate_batch preserves the gram matrix") {
    RngStream rng(25, 0);
    const SampleBatch b = standard_batch(5, 3, rng);
    const SampleBatch r = rotate_batch(haar_rotation(5, rng), b);
    CHECK(max_abs(gram_of_rows(r.vectors).matrix() - gram_of_rows(b.vectors).matrix()) < 1e-12);
    CHECK_THROWS_AS(rotate_batch(Matrix::identity(4), b), DimensionMismatch);
}

TEST_CASE("stats merge equals sequential accumulation") {
    RunningStats all, left, right;
    Comoments<2> call, cl, cr;
    RngStream rng(26, 0);
    for (int k = 0; k < 1000; ++k) {
        const double x = rng.normal();
        const double y = x + rng.normal();
        all.add(x);
        call.add({x, y});
        (k < 300 ? left : right).add(x);
        (k < 300 ? cl : cr).add({x, y});
    }
    left.merge(right);
    cl.merge(cr);
    CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
    CHECK(cl.covariance(0, 1) == doctest::Approx(call.covariance(0, 1)).epsilon(1e-12));
}
