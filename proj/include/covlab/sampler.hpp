#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "covlab/matrix.hpp"
#include "covlab/rng.hpp"

namespace covlab {

struct FullRankTag {};

/// Covariance Id - U Uᵀ for a k-dimensional subspace span(U); k = 1 is the
/// projector onto θ⊥.
struct DeficientProjectionTag {
    std::size_t k = 1;
    std::optional<Vector> theta;  ///< set when k == 1 and θ is known
};

struct ExplicitCovarianceTag {
    SymMatrix covariance;
};

using EnsembleTag = std::variant<FullRankTag, DeficientProjectionTag, ExplicitCovarianceTag>;

/// n samples in R^d, one per row, with the stream that produced them.
struct SampleBatch {
    Matrix vectors;
    EnsembleTag tag;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    std::size_t dim() const { return vectors.cols(); }
    std::size_t count() const { return vectors.rows(); }
    std::span<const double> sample(std::size_t i) const { return vectors.row(i); }
};

Vector gaussian_vector(std::size_t d, RngStream& rng);

/// Uniform point on the unit sphere S^{d-1}. Throws DegenerateDraw after 100
/// consecutive underflowing Gaussian draws.
Vector uniform_sphere(std::size_t d, RngStream& rng);

/// Haar-distributed rotation in SO(d): QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q, then one column negated if det = -1.
Matrix haar_rotation(std::size_t d, RngStream& rng);

/// d×k matrix with orthonormal columns spanning a uniformly random k-plane.
Matrix random_frame(std::size_t d, std::size_t k, RngStream& rng);

/// Id - U Uᵀ for a uniformly random k-dimensional subspace.
SymMatrix random_deficient_projector(std::size_t d, std::size_t k, RngStream& rng);

/// n independent draws of cov^{1/2} X. Throws NotPsd.
SampleBatch sample_batch(const SymMatrix& cov, std::size_t n, RngStream& rng);

/// n independent draws of root * X for a precomputed square root.
SampleBatch sample_batch_with_root(const SymMatrix& root, std::size_t n, RngStream& rng,
                                   EnsembleTag tag);

/// n standard Gaussian vectors in R^d (covariance Id, no square root needed).
SampleBatch standard_batch(std::size_t d, std::size_t n, RngStream& rng);

/// Applies the orthogonal map T to every sample.
SampleBatch rotate_batch(const Matrix& rotation, const SampleBatch& batch);

}  // namespace covlab
