#include "covlab/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "covlab/errors.hpp"

namespace covlab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

namespace {
template <class Op>
Matrix elementwise(const Matrix& a, const Matrix& b, Op op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("elementwise shape mismatch");
    Matrix c(a.rows(), a.cols());
    auto ad = a.data();
    auto bd = b.data();
    auto cd = c.data();
    for (std::size_t k = 0; k < cd.size(); ++k) cd[k] = op(ad[k], bd[k]);
    return c;
}
}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
    return elementwise(a, b, [](double x, double y) { return x + y; });
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    return elementwise(a, b, [](double x, double y) { return x - y; });
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (double& v : c.data()) v *= s;
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix::SymMatrix(std::size_t dim) : m_(dim, dim) {
    if (dim == 0) throw InvalidParams("SymMatrix dimension must be >= 1");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    *this = from_matrix(Matrix(rows));
}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s.m_(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw NotSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") and its transpose differ");
            s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    }
    return s;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix s(dim);
    for (std::size_t i = 0; i < dim; ++i) s.m_(i, i) = 1.0;
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix s(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) s.m_(i, i) = diag[i];
    return s;
}

SymMatrix SymMatrix::outer(std::span<const double> v) {
    SymMatrix s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i; j < v.size(); ++j) s.set(i, j, v[i] * v[j]);
    return s;
}

SymMatrix SymMatrix::submatrix(std::span<const std::size_t> idx) const {
    SymMatrix s(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] >= dim()) throw IndexOutOfRange("submatrix index out of range");
        for (std::size_t b = a; b < idx.size(); ++b) s.set(a, b, m_(idx[a], idx[b]));
    }
    return s;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix::from_matrix(a.matrix() + b.matrix(), 0.0);
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix::from_matrix(a.matrix() - b.matrix(), 0.0);
}

SymMatrix operator*(double s, const SymMatrix& a) {
    return SymMatrix::from_matrix(s * a.matrix(), 0.0);
}

double trace(const SymMatrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

SymMatrix gram_of_columns(const Matrix& a) {
    SymMatrix g(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
            g.set(i, j, s);
        }
    return g;
}

SymMatrix gram_of_rows(const Matrix& a) {
    SymMatrix g(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.rows(); ++j) g.set(i, j, dot(a.row(i), a.row(j)));
    return g;
}

SymMatrix congruence(const Matrix& b, const SymMatrix& s) {
    const Matrix bs = b * s.matrix();
    SymMatrix out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = i; j < b.rows(); ++j) out.set(i, j, dot(bs.row(i), b.row(j)));
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product length mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace covlab
