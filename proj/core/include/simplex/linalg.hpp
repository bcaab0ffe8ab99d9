#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "simplex/errors.hpp"

namespace simplex {

/// Relative cutoff under which singular values are treated as zero.
/// Well above double-precision noise, well below geometric scales once
/// data is in sane units.
inline constexpr double kRankTol = 1e-10;

/// Dense row-major matrix of doubles. Sized for the small kernels this
/// library needs (sides up to a few dozen); not a general-purpose type.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Contiguous view of row i.
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, std::span<const double> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---- small vector helpers -------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double distance2(std::span<const double> a, std::span<const double> b);

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

// ---- factorizations and derived quantities --------------------------------

/// Determinant with the sign read off the pivoted LU factorization.
struct Determinant {
  double value = 0.0;
  int sign = 0;  // 0 for an exactly singular factorization
};

Determinant determinant_with_sign(const Matrix& m);
double determinant(const Matrix& m);

/// Transposed cofactor matrix; satisfies m * adj(m) = det(m) * I and is
/// defined for singular m as well.
Matrix adjugate(const Matrix& m);

/// Solves the square system a * x = b; throws DegeneracyError when the
/// pivoted factorization breaks down.
std::vector<double> solve(const Matrix& a, std::span<const double> b);

/// Thin SVD, m = u * diag(s) * v^T, singular values sorted descending.
/// Computed by one-sided Jacobi rotations on the Gram structure.
struct Svd {
  Matrix u;                            // rows(m) x r
  std::vector<double> singular_values; // length r = min(rows, cols)
  Matrix v;                            // cols(m) x r
};

Svd svd(const Matrix& m);

/// Moore-Penrose pseudo-inverse; singular values below tol * s_max are
/// treated as zero.
Matrix pseudo_inverse(const Matrix& m, double tol = kRankTol);

/// Unit vector spanning the one-dimensional nullspace of a square matrix.
/// Sign is unconstrained; the caller orients it. Throws DegeneracyError
/// ("nullspace not unique") when zero or several singular values fall
/// below tol * s_max.
std::vector<double> null_unit_vector(const Matrix& m, double tol = kRankTol);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
/// Eigenvalues sorted descending; vectors() column i pairs with values[i].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

SymmetricEigen eigen_symmetric(const Matrix& a);

/// Principal component analysis of n points given as rows of `points`.
/// The basis has d orthonormal columns; variances carry the full
/// descending spectrum (length min(n, dim)) regardless of d.
struct Pca {
  std::vector<double> mean;
  Matrix basis;  // dim x d, orthonormal columns
  std::vector<double> variances;
};

Pca principal_components(const Matrix& points, std::size_t d);

}  // namespace simplex
