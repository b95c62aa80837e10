#include "covlab/sampler.hpp"

#include <cmath>
#include <utility>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"

namespace covlab {

namespace {

constexpr int kSphereRetries = 100;

}  // namespace

Vector gaussian_vector(std::size_t d, RngStream& rng) {
    if (d == 0) throw InvalidParams("dimension must be >= 1");
    Vector x(d);
    for (double& v : x) v = rng.normal();
    return x;
}

Vector uniform_sphere(std::size_t d, RngStream& rng) {
    if (d < 2) throw InvalidParams("uniform_sphere requires d >= 2");
    for (int attempt = 0; attempt < kSphereRetries; ++attempt) {
        Vector x = gaussian_vector(d, rng);
        const double len = norm(x);
        if (!(len > 1e-150) || !std::isfinite(len)) continue;
        for (double& v : x) v /= len;
        return x;
    }
    throw DegenerateDraw("Gaussian draw norm underflowed 100 times");
}

Matrix haar_rotation(std::size_t d, RngStream& rng) {
    if (d < 2) throw InvalidParams("haar_rotation requires d >= 2");
    Matrix g(d, d);
    for (double& v : g.data()) v = rng.normal();
    QrDecomposition qr = householder_qr(g);
    Matrix& q = qr.q;
    for (std::size_t j = 0; j < d; ++j) {
        if (qr.r(j, j) < 0.0)
            for (std::size_t i = 0; i < d; ++i) q(i, j) = -q(i, j);
    }
    if (determinant(q) < 0.0)
        for (std::size_t i = 0; i < d; ++i) q(i, 0) = -q(i, 0);
    return std::move(q);
}

Matrix random_frame(std::size_t d, std::size_t k, RngStream& rng) {
    if (k > d) throw InvalidParams("subspace dimension exceeds ambient dimension");
    Matrix frame(d, k);
    for (std::size_t j = 0; j < k; ++j) {
        const Vector v = uniform_sphere(d, rng);
        for (std::size_t i = 0; i < d; ++i) frame(i, j) = v[i];
    }
    return orthonormalize_columns(frame);
}

SymMatrix random_deficient_projector(std::size_t d, std::size_t k, RngStream& rng) {
    if (k == 1) return projector_complement(uniform_sphere(d, rng));
    return SymMatrix::identity(d) - projector_onto(random_frame(d, k, rng));
}

SampleBatch sample_batch_with_root(const SymMatrix& root, std::size_t n, RngStream& rng,
                                   EnsembleTag tag) {
    const std::size_t d = root.dim();
    SampleBatch batch{Matrix(n, d), std::move(tag), rng.seed(), rng.stream_id()};
    Vector x(d);
    for (std::size_t s = 0; s < n; ++s) {
        for (double& v : x) v = rng.normal();
        auto out = batch.vectors.row(s);
        for (std::size_t i = 0; i < d; ++i) out[i] = dot(root.matrix().row(i), x);
    }
    return batch;
}

SampleBatch sample_batch(const SymMatrix& cov, std::size_t n, RngStream& rng) {
    return sample_batch_with_root(sym_sqrt(cov), n, rng, ExplicitCovarianceTag{cov});
}

SampleBatch standard_batch(std::size_t d, std::size_t n, RngStream& rng) {
    SampleBatch batch{Matrix(n, d), FullRankTag{}, rng.seed(), rng.stream_id()};
    for (double& v : batch.vectors.data()) v = rng.normal();
    return batch;
}

SampleBatch rotate_batch(const Matrix& rotation, const SampleBatch& batch) {
    if (rotation.cols() != batch.dim()) throw DimensionMismatch("rotation size differs from batch dim");
    SampleBatch out = batch;
    out.vectors = batch.vectors * rotation.transposed();
    return out;
}

}  // namespace covlab
