#pragma once

// Dense symmetric-matrix primitives: Jacobi eigendecomposition, PSD square
// roots, Cholesky with log-determinant, pseudo-inverses, projectors and
// principal-angle subspace intersection. All functions are pure.

#include <cstddef>
#include <span>

#include "covlab/matrix.hpp"

namespace covlab {

/// Eigenvalues in [-kPsdRelativeTolerance * max|λ|, 0) are rounding noise.
inline constexpr double kPsdRelativeTolerance = 1e-10;
/// Relative eigenvalue cutoff for rank and pseudo-inverse.
inline constexpr double kRankTolerance = 1e-8;
/// A principal cosine above 1 - kPrincipalAngleTolerance counts as angle 0.
inline constexpr double kPrincipalAngleTolerance = 1e-8;
/// Tolerance on |θ| - 1 for unit-vector inputs.
inline constexpr double kUnitTolerance = 1e-12;
/// Tolerance on entries of UᵀU - I for orthonormal-basis inputs.
inline constexpr double kOrthonormalTolerance = 1e-9;

struct EigenDecomposition {
    Vector values;   ///< ascending
    Matrix vectors;  ///< column k is the unit eigenvector for values[k]
};

/// Cyclic Jacobi rotations. Converges quadratically; intended for dims up to
/// a few hundred.
EigenDecomposition jacobi_eigen(const SymMatrix& a);

struct PsdCertificate {
    SymMatrix matrix;
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;

    bool certified() const { return min_eigenvalue >= -tolerance; }
};

PsdCertificate certify_psd(const SymMatrix& a);

/// Symmetric PSD square root. Throws NotPsd.
SymMatrix sym_sqrt(const SymMatrix& a);

struct CholeskyLogdet {
    Matrix factor;  ///< lower triangular, factor * factorᵀ = a
    double logdet = 0.0;
};

/// Throws NotPd when a pivot is non-positive.
CholeskyLogdet cholesky_logdet(const SymMatrix& a);

/// Solves (L Lᵀ) x = b given the lower Cholesky factor.
Vector cholesky_solve(const Matrix& lower, std::span<const double> b);

/// Moore-Penrose pseudo-inverse of a PSD matrix. Eigenvalues below
/// rank_tol * max eigenvalue are treated as zero. Throws NotPsd.
SymMatrix pseudo_inverse(const SymMatrix& a, double rank_tol = kRankTolerance);

std::size_t numerical_rank(const SymMatrix& a, double rank_tol = kRankTolerance);

/// Orthonormal basis (as columns) of the range of a PSD matrix.
Matrix range_basis(const SymMatrix& a, double rank_tol = kRankTolerance);

/// Id - θθᵀ. Throws NotUnit if |θ| deviates from 1 by more than kUnitTolerance.
SymMatrix projector_complement(std::span<const double> theta);

/// Orthogonal projector U Uᵀ onto the span of orthonormal columns of U.
SymMatrix projector_onto(const Matrix& basis);

/// Cosines of the principal angles between span(U) and span(V), descending.
/// Throws BasisNotOrthonormal.
Vector principal_cosines(const Matrix& basis_u, const Matrix& basis_v);

/// dim(span(U) ∩ span(V)) for orthonormal column bases, counting principal
/// cosines above 1 - kPrincipalAngleTolerance.
std::size_t subspace_intersection_dim(const Matrix& basis_u, const Matrix& basis_v);

struct QrDecomposition {
    Matrix q;  ///< orthogonal
    Matrix r;  ///< upper triangular
};

/// Householder QR of a square matrix.
QrDecomposition householder_qr(const Matrix& a);

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& a);

/// Modified Gram-Schmidt on the columns. Throws DegenerateDraw if a column
/// is numerically dependent on the previous ones.
Matrix orthonormalize_columns(const Matrix& a);

}  // namespace covlab
