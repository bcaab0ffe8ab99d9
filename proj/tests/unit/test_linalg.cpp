#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "simplex/linalg.hpp"

#ifdef HAVE_EIGEN_ORACLE
#include <Eigen/Dense>
#include <Eigen/SVD>
#endif

using namespace simplex;
using testutil::max_abs_diff;
using testutil::random_matrix;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

TEST_CASE("determinant basics") {
  for (std::size_t n : {1u, 3u, 6u}) {
    CHECK(determinant(Matrix::identity(n)) == doctest::Approx(1.0));
  }
  CHECK(determinant(from_rows({{1, 2}, {3, 4}})) == doctest::Approx(-2.0));
  CHECK(determinant(from_rows({{1, 2}, {1, 2}})) == doctest::Approx(0.0));
  CHECK_THROWS_AS(determinant(Matrix(2, 3)), DimensionError);
}

TEST_CASE("determinant sign comes from the factorization") {
  const Determinant d = determinant_with_sign(from_rows({{0, 1}, {1, 0}}));
  CHECK(d.value == doctest::Approx(-1.0));
  CHECK(d.sign == -1);
  CHECK(determinant_with_sign(from_rows({{1, 1}, {1, 1}})).sign == 0);
}

TEST_CASE("adjugate closed forms") {
  CHECK(max_abs_diff(adjugate(Matrix::identity(4)), Matrix::identity(4)) < 1e-15);
  const Matrix adj = adjugate(from_rows({{1, 2}, {3, 4}}));
  CHECK(max_abs_diff(adj, from_rows({{4, -2}, {-3, 1}})) < 1e-15);
  CHECK_THROWS_AS(adjugate(Matrix(3, 2)), DimensionError);
}

TEST_CASE("adjugate identity on random matrices") {
  Rng rng(12001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const Matrix m = random_matrix(n, n, rng);
    const double det = determinant(m);
    const Matrix product = multiply(m, adjugate(m));
    Matrix expected = Matrix::identity(n);
    for (double& x : expected.data()) x *= det;
    const double scale = std::max(1.0, std::abs(det));
    CHECK(max_abs_diff(product, expected) / scale < 1e-8);
  }
}

TEST_CASE("adjugate of a singular matrix uses cofactors") {
  // Rank-2 4x4: rows 2,3 are multiples of rows 0,1.
  const Matrix m = from_rows({{1, 2, 3, 4},
                              {2, 1, 0, 1},
                              {2, 4, 6, 8},
                              {4, 2, 0, 2}});
  const Matrix adj = adjugate(m);
  // For rank <= n-2 every cofactor vanishes.
  CHECK(testutil::max_abs(adj) < 1e-12);

  // Rank n-1: adjugate is nonzero and m * adj = 0.
  const Matrix r3 = from_rows({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  const Matrix adj3 = adjugate(r3);
  CHECK(testutil::max_abs(adj3) > 0.1);
  CHECK(testutil::max_abs(multiply(r3, adj3)) < 1e-12);
}

TEST_CASE("pseudo-inverse of an invertible matrix is the inverse") {
  const Matrix m = from_rows({{2, 1}, {1, 3}});
  const Matrix inv = pseudo_inverse(m);
  CHECK(max_abs_diff(multiply(m, inv), Matrix::identity(2)) < 1e-12);
}

TEST_CASE("pseudo-inverse of the zero matrix is the transposed zero") {
  const Matrix z(3, 2);
  const Matrix p = pseudo_inverse(z);
  CHECK(p.rows() == 2);
  CHECK(p.cols() == 3);
  CHECK(testutil::max_abs(p) == 0.0);
}

namespace {

bool moore_penrose_holds(const Matrix& m, const Matrix& p, double tol) {
  const Matrix mp = multiply(m, p);
  const Matrix pm = multiply(p, m);
  if (max_abs_diff(multiply(mp, m), m) > tol) return false;
  if (max_abs_diff(multiply(pm, p), p) > tol) return false;
  if (max_abs_diff(mp, transpose(mp)) > tol) return false;
  if (max_abs_diff(pm, transpose(pm)) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("Moore-Penrose conditions on rank-deficient inputs") {
  Rng rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 2 + rng.uniform_index(5);
    const std::size_t cols = 2 + rng.uniform_index(5);
    const std::size_t rank = 1 + rng.uniform_index(std::min(rows, cols));
    const Matrix a = random_matrix(rows, rank, rng);
    const Matrix b = random_matrix(rank, cols, rng);
    const Matrix m = multiply(a, b);
    const Matrix p = pseudo_inverse(m);
    const double scale = std::max(1.0, testutil::max_abs(m));
    CHECK(moore_penrose_holds(m, p, 1e-8 * scale));
  }
}

#ifdef HAVE_EIGEN_ORACLE
namespace {

Matrix eigen_pinv_oracle(const Matrix& m, double tol) {
  Eigen::MatrixXd em(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) em(i, j) = m(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(em, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::MatrixXd sinv = Eigen::MatrixXd::Zero(s.size(), s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) sinv(i, i) = 1.0 / s(i);
  }
  const Eigen::MatrixXd p = svd.matrixV() * sinv * svd.matrixU().transpose();
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = p(i, j);
  }
  return out;
}

}  // namespace

TEST_CASE("pseudo-inverse matches an independent SVD oracle") {
  const Matrix rank1 = from_rows({{1, 0}, {1, 0}});
  CHECK(max_abs_diff(pseudo_inverse(rank1), eigen_pinv_oracle(rank1, kRankTol)) < 1e-12);

  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 2 + rng.uniform_index(6);
    const std::size_t cols = 2 + rng.uniform_index(6);
    const Matrix m = random_matrix(rows, cols, rng);
    CHECK(max_abs_diff(pseudo_inverse(m), eigen_pinv_oracle(m, kRankTol)) < 1e-9);
  }
}

TEST_CASE("singular values match the Eigen oracle") {
  Rng rng(401);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + rng.uniform_index(7);
    const std::size_t cols = 1 + rng.uniform_index(7);
    const Matrix m = random_matrix(rows, cols, rng);
    Eigen::MatrixXd em(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) em(i, j) = m(i, j);
    }
    const Eigen::VectorXd ref = em.jacobiSvd().singularValues();
    const Svd mine = svd(m);
    REQUIRE(mine.singular_values.size() == static_cast<std::size_t>(ref.size()));
    for (int i = 0; i < ref.size(); ++i) {
      CHECK(mine.singular_values[i] == doctest::Approx(ref(i)).epsilon(1e-10));
    }
  }
}
#endif  // HAVE_EIGEN_ORACLE

TEST_CASE("svd reconstructs the input") {
  Rng rng(9202);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng.uniform_index(7);
    const std::size_t cols = 1 + rng.uniform_index(7);
    const Matrix m = random_matrix(rows, cols, rng);
    const Svd f = svd(m);
    Matrix us = f.u;
    for (std::size_t j = 0; j < f.singular_values.size(); ++j) {
      for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= f.singular_values[j];
    }
    CHECK(max_abs_diff(multiply(us, transpose(f.v)), m) < 1e-10);
  }
}

TEST_CASE("null_unit_vector on a diagonal gap") {
  const Matrix m = from_rows({{1, 0}, {0, 0}});
  const std::vector<double> v = null_unit_vector(m);
  CHECK(std::abs(v[0]) < 1e-12);
  CHECK(std::abs(std::abs(v[1]) - 1.0) < 1e-12);
}

TEST_CASE("null_unit_vector finds the hypotenuse normal") {
  // (I - 11^T/2) Theta_{-0}^T for the unit right triangle (0,0),(1,0),(0,1):
  // rows are the facet vertices (1,0),(0,1) about their mean.
  const Matrix m = from_rows({{0.5, -0.5}, {-0.5, 0.5}});
  const std::vector<double> v = null_unit_vector(m);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(v[0]) - inv_sqrt2) < 1e-12);
  CHECK(std::abs(std::abs(v[1]) - inv_sqrt2) < 1e-12);
  CHECK(v[0] * v[1] > 0.0);  // both components share a sign
}

TEST_CASE("null_unit_vector rejects full-rank and rank-deficient-by-2 input") {
  CHECK_THROWS_AS(null_unit_vector(Matrix::identity(3)), DegeneracyError);
  CHECK_THROWS_AS(null_unit_vector(Matrix(2, 2)), DegeneracyError);
}

TEST_CASE("eigen_symmetric recovers a known spectrum") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(6);
    const Matrix a0 = random_matrix(n, n, rng);
    const Matrix sym = multiply(a0, transpose(a0));
    const SymmetricEigen eig = eigen_symmetric(sym);
    // Descending, non-negative for a Gram matrix.
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.values[i] >= eig.values[i + 1] - 1e-12);
    // A V = V diag(values)
    const Matrix av = multiply(sym, eig.vectors);
    Matrix vl = eig.vectors;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) vl(i, j) *= eig.values[j];
    }
    CHECK(max_abs_diff(av, vl) < 1e-8 * std::max(1.0, std::abs(eig.values[0])));
  }
}

TEST_CASE("principal components of a perfect line") {
  Matrix pts(5, 2);
  for (int i = 0; i < 5; ++i) {
    pts(i, 0) = i;
    pts(i, 1) = i;
  }
  const Pca pca = principal_components(pts, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(pca.basis(0, 0)) - inv_sqrt2) < 1e-10);
  CHECK(std::abs(std::abs(pca.basis(1, 0)) - inv_sqrt2) < 1e-10);
  CHECK(pca.basis(0, 0) * pca.basis(1, 0) > 0.0);
  REQUIRE(pca.variances.size() == 2);
  CHECK(pca.variances[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("full-rank projection reconstructs exactly") {
  Rng rng(88);
  const Matrix pts = random_matrix(20, 4, rng);
  const Pca pca = principal_components(pts, 4);
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    std::vector<double> centered(4);
    for (std::size_t j = 0; j < 4; ++j) centered[j] = pts(i, j) - pca.mean[j];
    std::vector<double> recon(4, 0.0);
    for (std::size_t c = 0; c < 4; ++c) {
      const double z = dot(centered, pca.basis.column(c));
      for (std::size_t j = 0; j < 4; ++j) recon[j] += z * pca.basis(j, c);
    }
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(recon[j] == doctest::Approx(centered[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("wide data: d = n-1 components lose nothing") {
  // n points in a much higher-dimensional space lie on an (n-1)-dimensional
  // affine subspace; the Gram route must capture it exactly.
  Rng rng(999);
  const std::size_t n = 8, dim = 300;
  const Matrix pts = random_matrix(n, dim, rng);
  const Pca pca = principal_components(pts, n - 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> centered(dim);
    for (std::size_t j = 0; j < dim; ++j) centered[j] = pts(i, j) - pca.mean[j];
    std::vector<double> recon(dim, 0.0);
    for (std::size_t c = 0; c < n - 1; ++c) {
      const double z = dot(centered, pca.basis.column(c));
      for (std::size_t j = 0; j < dim; ++j) recon[j] += z * pca.basis(j, c);
    }
    for (std::size_t j = 0; j < dim; ++j) {
      worst = std::max(worst, std::abs(recon[j] - centered[j]));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("pca basis orthonormal and variances preserved") {
  Rng rng(4242);
  const std::size_t n = 40, dim = 6;
  const Matrix pts = random_matrix(n, dim, rng);
  const Pca pca = principal_components(pts, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const double g = dot(pca.basis.column(a), pca.basis.column(b));
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double c = pts(i, j) - pca.mean[j];
      total += c * c;
    }
  }
  total /= static_cast<double>(n - 1);
  double spectrum = 0.0;
  for (double v : pca.variances) spectrum += v;
  CHECK(total == doctest::Approx(spectrum).epsilon(1e-10));
}

TEST_CASE("pca rejects out-of-range targets") {
  Matrix pts(5, 3, 1.0);
  CHECK_THROWS_AS(principal_components(pts, 0), DimensionError);
  CHECK_THROWS_AS(principal_components(pts, 4), DimensionError);
  CHECK_THROWS_AS(principal_components(Matrix(6, 4), 5), DimensionError);
}
