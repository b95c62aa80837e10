#pragma once

// Conditional second moments of a Gaussian vector Y ~ N(0, A) at a coordinate
// pair (i, j): the 2×2 precision block, its inverse (the conditional
// covariance given every other coordinate is zero), a rejection-sampling
// estimate of the same object, and the covariance of the uniform law on the
// planar section of the ellipsoid A^{1/2} B_d by E = span(e1, e2).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "covlab/matrix.hpp"
#include "covlab/parallel.hpp"
#include "covlab/rng.hpp"

namespace covlab {

/// Largest dimension for which the rejection estimator is attempted.
inline constexpr std::size_t kMaxRejectionDim = 6;
inline constexpr std::size_t kMinAcceptances = 1000;

struct AlphaMatrix {
    std::size_t i = 0;
    std::size_t j = 1;
    SymMatrix values{SymMatrix::identity(2)};
};

/// Entries of A⁻¹ at rows/columns {i, j}, from two Cholesky solves.
/// Indices are 0-based. Throws NotPd, IndexOutOfRange.
SymMatrix precision_block(const SymMatrix& a, std::size_t i, std::size_t j);

/// Inverse of precision_block. Throws SingularBlock on a numerically
/// singular block.
AlphaMatrix alpha_analytic(const SymMatrix& a, std::size_t i, std::size_t j);

/// A_EE - A_ER A_RR⁻¹ A_RE with E = {i, j} and R the remaining indices.
SymMatrix schur_conditional_covariance(const SymMatrix& a, std::size_t i, std::size_t j);

struct AlphaEstimate {
    double epsilon = 0.0;
    /// Plain average of (Y_i, Y_j) second moments over accepted proposals.
    AlphaMatrix raw;
    std::array<double, 3> raw_se{};  ///< (ii, ij, jj)
    /// Same target with the part of X orthogonal to the conditioning rows
    /// integrated out exactly (conditional Monte Carlo).
    AlphaMatrix conditional;
    std::array<double, 3> conditional_se{};
    std::size_t accepted = 0;
    std::size_t proposals = 0;
    double acceptance_rate() const {
        return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
    }
};

/// Second moments of (Y_i, Y_j) given |Y_k| < ε for every other k, by
/// rejection from `trials` proposals Y = A^{1/2} X. Requires dim ≤ 6.
/// Throws TooFewAcceptances when fewer than 1000 proposals are accepted.
AlphaEstimate alpha_monte_carlo(const SymMatrix& a, std::size_t i, std::size_t j, double epsilon,
                                std::size_t trials, const RngStream& rng, ExecPolicy exec = {});

/// One pass over the proposals, evaluated at several slab widths at once.
std::vector<AlphaEstimate> alpha_monte_carlo_sweep(const SymMatrix& a, std::size_t i,
                                                   std::size_t j, std::span<const double> epsilons,
                                                   std::size_t trials, const RngStream& rng,
                                                   ExecPolicy exec = {});

struct SectionCovariance {
    SymMatrix matrix = SymMatrix(2);
    std::size_t rank = 0;
};

/// Covariance of the uniform distribution on the solid section
/// A^{1/2} B_d ∩ span(e1, e2). Rank is dim(E ∩ range(A)). Throws NotPsd.
SectionCovariance section_covariance(const SymMatrix& a);

/// K with K · section_covariance(A) = alpha_analytic(A, 0, 1) for full-rank A.
/// Under the solid-section convention this is 4 in every dimension d ≥ 3.
double kd_constant(std::size_t d);

}  // namespace covlab
