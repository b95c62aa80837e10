#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace covlab {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Carrier for batches, factors and rotations.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    Vector column(std::size_t j) const;

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Dense symmetric matrix. Both triangles are stored and every mutation
/// writes the mirrored entry, so entry(i,j) == entry(j,i) holds exactly.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim);
    SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

    /// Throws NotSymmetric if |m(i,j) - m(j,i)| exceeds `tol`; the stored
    /// value is the average of the two.
    static SymMatrix from_matrix(const Matrix& m, double tol = 1e-12);
    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> diag);
    /// v vᵀ
    static SymMatrix outer(std::span<const double> v);

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& matrix() const { return m_; }

    /// Principal submatrix on the given index set.
    SymMatrix submatrix(std::span<const std::size_t> idx) const;

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  private:
    Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

double trace(const SymMatrix& a);

/// aᵀ a, symmetric by construction.
SymMatrix gram_of_columns(const Matrix& a);
/// a aᵀ, symmetric by construction.
SymMatrix gram_of_rows(const Matrix& a);

/// B S Bᵀ for symmetric S.
SymMatrix congruence(const Matrix& b, const SymMatrix& s);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace covlab
