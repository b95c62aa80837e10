#include "covlab/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

constexpr int kMaxSweeps = 100;

void rotate(Matrix& m, std::size_t i, std::size_t j, std::size_t k, std::size_t l, double c,
            double s) {
    const double g = m(i, j);
    const double h = m(k, l);
    m(i, j) = c * g - s * h;
    m(k, l) = s * g + c * h;
}

double max_abs_eigenvalue(const Vector& values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

/// V diag(f(λ)) Vᵀ
template <class F>
SymMatrix spectral_map(const EigenDecomposition& eig, F f) {
    const std::size_t n = eig.values.size();
    Vector mapped(n);
    for (std::size_t k = 0; k < n; ++k) mapped[k] = f(eig.values[k]);
    return congruence(eig.vectors, SymMatrix::diagonal(mapped));
}

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) throw DimensionMismatch(std::string(what) + " requires a square matrix");
}

}  // namespace

EigenDecomposition jacobi_eigen(const SymMatrix& input) {
    const std::size_t n = input.dim();
    Matrix a = input.matrix();
    Matrix v = Matrix::identity(n);

    const double scale = frobenius_norm(a);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off == 0.0 || off <= (eps * scale) * (eps * scale) * 1e-4) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Off-diagonal already below the resolution of both diagonal entries.
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    const double new_rp = arp - s * (arq + tau * arp);
                    const double new_rq = arq + s * (arp - tau * arq);
                    a(r, p) = new_rp;
                    a(p, r) = new_rp;
                    a(r, q) = new_rq;
                    a(q, r) = new_rq;
                }
                for (std::size_t r = 0; r < n; ++r) rotate(v, r, p, r, q, c, s);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

namespace {

PsdCertificate certify(const SymMatrix& a, const EigenDecomposition& eig) {
    PsdCertificate cert{a, eig.values.front(), kPsdRelativeTolerance * max_abs_eigenvalue(eig.values)};
    return cert;
}

EigenDecomposition psd_eigen(const SymMatrix& a) {
    EigenDecomposition eig = jacobi_eigen(a);
    const PsdCertificate cert = certify(a, eig);
    if (!cert.certified())
        throw NotPsd("matrix is not positive semi-definite (min eigenvalue " +
                     std::to_string(cert.min_eigenvalue) + ")");
    for (double& v : eig.values) v = std::max(v, 0.0);
    return eig;
}

}  // namespace

PsdCertificate certify_psd(const SymMatrix& a) { return certify(a, jacobi_eigen(a)); }

SymMatrix sym_sqrt(const SymMatrix& a) {
    return spectral_map(psd_eigen(a), [](double l) { return std::sqrt(l); });
}

CholeskyLogdet cholesky_logdet(const SymMatrix& a) {
    const std::size_t n = a.dim();
    CholeskyLogdet out{Matrix(n, n), 0.0};
    Matrix& l = out.factor;
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 0.0))
            throw NotPd("leading minor " + std::to_string(j + 1) + " is not positive");
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        out.logdet += 2.0 * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return out;
}

Vector cholesky_solve(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw DimensionMismatch("cholesky_solve right-hand side length");
    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
        y[i] /= lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) y[i] -= lower(k, i) * y[k];
        y[i] /= lower(i, i);
    }
    return y;
}

SymMatrix pseudo_inverse(const SymMatrix& a, double rank_tol) {
    const EigenDecomposition eig = psd_eigen(a);
    const double cutoff = rank_tol * eig.values.back();
    return spectral_map(eig, [cutoff](double l) { return (l > cutoff && l > 0.0) ? 1.0 / l : 0.0; });
}

std::size_t numerical_rank(const SymMatrix& a, double rank_tol) {
    const EigenDecomposition eig = jacobi_eigen(a);
    const double cutoff = rank_tol * max_abs_eigenvalue(eig.values);
    return static_cast<std::size_t>(std::count_if(eig.values.begin(), eig.values.end(),
                                                  [cutoff](double l) { return l > cutoff; }));
}

Matrix range_basis(const SymMatrix& a, double rank_tol) {
    const EigenDecomposition eig = psd_eigen(a);
    const std::size_t n = a.dim();
    const double cutoff = rank_tol * eig.values.back();
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < n; ++k)
        if (eig.values[k] > cutoff && eig.values[k] > 0.0) keep.push_back(k);
    Matrix basis(n, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) basis(r, c) = eig.vectors(r, keep[c]);
    return basis;
}

SymMatrix projector_complement(std::span<const double> theta) {
    if (theta.empty()) throw InvalidParams("theta must be non-empty");
    const double len = norm(theta);
    if (std::abs(len - 1.0) > kUnitTolerance)
        throw NotUnit("theta has norm " + std::to_string(len) + ", expected 1");
    const std::size_t d = theta.size();
    SymMatrix p(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) p.set(i, j, (i == j ? 1.0 : 0.0) - theta[i] * theta[j]);
    return p;
}

namespace {

void require_orthonormal(const Matrix& basis, const char* which) {
    for (std::size_t i = 0; i < basis.cols(); ++i)
        for (std::size_t j = i; j < basis.cols(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < basis.rows(); ++r) s += basis(r, i) * basis(r, j);
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > kOrthonormalTolerance)
                throw BasisNotOrthonormal(std::string(which) + " is not orthonormal");
        }
}

}  // namespace

SymMatrix projector_onto(const Matrix& basis) {
    require_orthonormal(basis, "basis");
    return gram_of_rows(basis);
}

Vector principal_cosines(const Matrix& basis_u, const Matrix& basis_v) {
    if (basis_u.rows() != basis_v.rows())
        throw DimensionMismatch("bases live in different ambient dimensions");
    require_orthonormal(basis_u, "basis_u");
    require_orthonormal(basis_v, "basis_v");
    const std::size_t k = std::min(basis_u.cols(), basis_v.cols());
    if (k == 0) return {};

    // Singular values of UᵀV via the eigenvalues of the smaller Gram product.
    const Matrix cross = basis_u.transposed() * basis_v;
    const SymMatrix small = basis_u.cols() <= basis_v.cols() ? gram_of_rows(cross)
                                                             : gram_of_columns(cross);
    const EigenDecomposition eig = jacobi_eigen(small);
    Vector cosines(k);
    for (std::size_t i = 0; i < k; ++i)
        cosines[i] = std::sqrt(std::clamp(eig.values[k - 1 - i], 0.0, 1.0));
    return cosines;
}

std::size_t subspace_intersection_dim(const Matrix& basis_u, const Matrix& basis_v) {
    const Vector cosines = principal_cosines(basis_u, basis_v);
    return static_cast<std::size_t>(std::count_if(cosines.begin(), cosines.end(), [](double c) {
        return c > 1.0 - kPrincipalAngleTolerance;
    }));
}

QrDecomposition householder_qr(const Matrix& a) {
    require_square(a, "householder_qr");
    const std::size_t n = a.rows();
    Matrix r = a;
    Matrix q = Matrix::identity(n);
    Vector v(n);
    for (std::size_t k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < n; ++i) alpha += r(i, k) * r(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (r(k, k) > 0.0) alpha = -alpha;

        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            v[i] = r(i, k) - (i == k ? alpha : 0.0);
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;

        // r <- H r, q <- q H with H = I - 2 v vᵀ / |v|².
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += v[i] * r(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k; j < n; ++j) s += q(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= s * v[j];
        }
        for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
    }
    return {std::move(q), std::move(r)};
}

double determinant(const Matrix& a) {
    require_square(a, "determinant");
    const std::size_t n = a.rows();
    Matrix lu = a;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
        if (lu(pivot, k) == 0.0) return 0.0;
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

Matrix orthonormalize_columns(const Matrix& a) {
    Matrix q = a;
    for (std::size_t j = 0; j < q.cols(); ++j) {
        double original = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r) original += q(r, j) * q(r, j);
        original = std::sqrt(original);
        // Two passes of projection keep the basis orthonormal to rounding.
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                double s = 0.0;
                for (std::size_t r = 0; r < q.rows(); ++r) s += q(r, i) * q(r, j);
                for (std::size_t r = 0; r < q.rows(); ++r) q(r, j) -= s * q(r, i);
            }
        double len = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r) len += q(r, j) * q(r, j);
        len = std::sqrt(len);
        if (!(len > 1e-10 * original) || len == 0.0)
            throw DegenerateDraw("columns are numerically dependent");
        for (std::size_t r = 0; r < q.rows(); ++r) q(r, j) /= len;
    }
    return q;
}

}  // namespace covlab
