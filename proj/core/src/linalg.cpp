#include "simplex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace simplex {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": square matrix required");
  }
}

/// In-place LU factorization with partial pivoting. Returns the permutation
/// sign, or 0 if a pivot column is exactly zero.
struct Lu {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

Lu lu_factor(const Matrix& m) {
  const std::size_t n = m.rows();
  Lu f;
  f.lu = m;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(f.lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      f.sign = 0;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    const double inv_pivot = 1.0 / f.lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = f.lu(i, k) * inv_pivot;
      f.lu(i, k) = factor;
      if (factor != 0.0) {
        for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= factor * f.lu(k, j);
      }
    }
  }
  return f;
}

std::vector<double> lu_solve(const Lu& f, std::span<const double> b) {
  const std::size_t n = f.perm.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

double lu_det(const Lu& f) {
  if (f.singular) return 0.0;
  double d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < f.perm.size(); ++i) d *= f.lu(i, i);
  return d;
}

Matrix minor_matrix(const Matrix& m, std::size_t drop_row, std::size_t drop_col) {
  const std::size_t n = m.rows();
  Matrix r(n - 1, n - 1);
  std::size_t ri = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == drop_row) continue;
    std::size_t rj = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == drop_col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}

/// Cofactor-expansion adjugate, O(n^5). Only used when the fast
/// det * inverse route is unavailable (singular input).
Matrix adjugate_by_cofactors(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = determinant(minor_matrix(m, i, j));
      adj(j, i) = ((i + j) % 2 == 0) ? c : -c;
    }
  }
  return adj;
}

double hadamard_bound(const Matrix& m) {
  double bound = 1.0;
  for (std::size_t i = 0; i < m.rows(); ++i) bound *= std::sqrt(norm2(m.row(i)));
  return bound;
}

}  // namespace

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double distance2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("multiply: vector length differs");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Determinant determinant_with_sign(const Matrix& m) {
  require_square(m, "determinant");
  const Lu f = lu_factor(m);
  const double value = lu_det(f);
  Determinant d;
  d.value = value;
  if (f.singular || value == 0.0) {
    d.sign = 0;
  } else {
    d.sign = std::signbit(value) ? -1 : 1;
  }
  return d;
}

double determinant(const Matrix& m) { return determinant_with_sign(m).value; }

Matrix adjugate(const Matrix& m) {
  require_square(m, "adjugate");
  const std::size_t n = m.rows();
  if (n == 1) {
    Matrix r(1, 1);
    r(0, 0) = 1.0;
    return r;
  }
  if (n == 2) {
    Matrix r(2, 2);
    r(0, 0) = m(1, 1);
    r(0, 1) = -m(0, 1);
    r(1, 0) = -m(1, 0);
    r(1, 1) = m(0, 0);
    return r;
  }
  const Lu f = lu_factor(m);
  const double det = lu_det(f);
  if (f.singular || std::abs(det) <= 1e-13 * hadamard_bound(m)) {
    return adjugate_by_cofactors(m);
  }
  // adj(m) = det(m) * m^{-1}, column by column.
  Matrix adj(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = lu_solve(f, e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) adj(i, j) = det * col[i];
  }
  return adj;
}

std::vector<double> solve(const Matrix& a, std::span<const double> b) {
  require_square(a, "solve");
  if (a.rows() != b.size()) throw DimensionError("solve: rhs length differs");
  const Lu f = lu_factor(a);
  if (f.singular) throw DegeneracyError("solve: singular system");
  return lu_solve(f, b);
}

Svd svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("svd: empty matrix");
  if (m.rows() < m.cols()) {
    Svd t = svd(transpose(m));
    std::swap(t.u, t.v);
    return t;
  }
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();

  // Work on explicit column vectors; rotations touch whole columns.
  std::vector<std::vector<double>> b(n);
  for (std::size_t j = 0; j < n; ++j) b[j] = m.column(j);
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  constexpr int kMaxSweeps = 64;
  constexpr double kOrthTol = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double app = norm2(b[p]);
        const double aqq = norm2(b[q]);
        const double apq = dot(b[p], b[q]);
        if (apq == 0.0 || std::abs(apq) <= kOrthTol * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double bp = b[p][i], bq = b[q][i];
          b[p][i] = c * bp - s * bq;
          b[q][i] = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v[p][i], vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norm2(b[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t c) { return sigma[a] > sigma[c]; });

  Svd out;
  out.u = Matrix(rows, n);
  out.v = Matrix(n, n);
  out.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    out.singular_values[j] = s;
    // Deterministic sign: largest-magnitude entry of the right vector positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v[src][i]) > std::abs(v[src][imax])) imax = i;
    }
    const double flip = v[src][imax] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = flip * v[src][i];
    const double inv = s > 0.0 ? flip / s : 0.0;
    for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = inv * b[src][i];
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double tol) {
  if (tol <= 0.0) throw DomainError("pseudo_inverse: tol must be positive");
  const Svd f = svd(m);
  const std::size_t r = f.singular_values.size();
  const double cutoff = tol * (r > 0 ? f.singular_values[0] : 0.0);
  // pinv = v * diag(1/s) * u^T
  Matrix p(m.cols(), m.rows());
  for (std::size_t k = 0; k < r; ++k) {
    const double s = f.singular_values[k];
    if (s <= cutoff || s == 0.0) continue;
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double vik = f.v(i, k) * inv;
      if (vik == 0.0) continue;
      for (std::size_t j = 0; j < m.rows(); ++j) p(i, j) += vik * f.u(j, k);
    }
  }
  return p;
}

std::vector<double> null_unit_vector(const Matrix& m, double tol) {
  require_square(m, "null_unit_vector");
  const Svd f = svd(m);
  const std::size_t n = f.singular_values.size();
  const double smax = f.singular_values[0];
  const double cutoff = tol * smax;
  std::size_t below = 0;
  for (double s : f.singular_values) {
    if (s <= cutoff) ++below;
  }
  if (below != 1) {
    throw DegeneracyError("null_unit_vector: nullspace not unique");
  }
  return f.v.column(n - 1);
}

SymmetricEigen eigen_symmetric(const Matrix& a) {
  require_square(a, "eigen_symmetric");
  const std::size_t n = a.rows();
  Matrix w = a;
  Matrix v = Matrix::identity(n);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += w(p, q) * w(p, q);
    }
    if (off <= 1e-30 * (1.0 + norm2(w.data()))) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double scale = std::abs(w(p, p)) + std::abs(w(q, q));
        if (scale + std::abs(apq) * 1e18 == scale) {
          w(p, q) = w(q, p) = 0.0;
          continue;
        }
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // Apply the rotation on both sides and accumulate eigenvectors.
        for (std::size_t i = 0; i < n; ++i) {
          const double wip = w(i, p), wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double wpj = w(p, j), wqj = w(q, j);
          w(p, j) = c * wpj - s * wqj;
          w(q, j) = s * wpj + c * wqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a2, std::size_t b2) { return w(a2, a2) > w(b2, b2); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v(i, order[j])) > std::abs(v(imax, order[j]))) imax = i;
    }
    const double flip = v(imax, order[j]) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = flip * v(i, order[j]);
  }
  return out;
}

namespace {

/// Gram-Schmidt completion used when the data rank falls short of the
/// requested number of components.
void complete_basis(Matrix& basis, std::size_t filled) {
  const std::size_t dim = basis.rows();
  const std::size_t want = basis.cols();
  std::size_t next_axis = 0;
  for (std::size_t j = filled; j < want; ++j) {
    std::vector<double> cand(dim, 0.0);
    bool ok = false;
    while (next_axis < dim && !ok) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[next_axis++] = 1.0;
      for (std::size_t k = 0; k < j; ++k) {
        const std::vector<double> bk = basis.column(k);
        const double proj = dot(cand, bk);
        for (std::size_t i = 0; i < dim; ++i) cand[i] -= proj * bk[i];
      }
      const double nn = std::sqrt(norm2(cand));
      if (nn > 1e-8) {
        for (double& c : cand) c /= nn;
        ok = true;
      }
    }
    if (!ok) throw DegeneracyError("principal_components: cannot complete basis");
    basis.set_column(j, cand);
  }
}

}  // namespace

Pca principal_components(const Matrix& points, std::size_t d) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (n < 2) throw DomainError("principal_components: need at least 2 points");
  if (d < 1 || d > std::min(n - 1, dim)) {
    throw DimensionError("principal_components: d out of range");
  }

  Pca out;
  out.mean.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = points.row(i);
    for (std::size_t j = 0; j < dim; ++j) out.mean[j] += r[j];
  }
  for (double& m : out.mean) m /= static_cast<double>(n);

  Matrix centered(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = points.row(i);
    for (std::size_t j = 0; j < dim; ++j) centered(i, j) = r[j] - out.mean[j];
  }

  const double denom = static_cast<double>(n - 1);
  const std::size_t spectrum = std::min(n, dim);
  out.basis = Matrix(dim, d);
  out.variances.assign(spectrum, 0.0);

  if (dim <= n) {
    Matrix cov(dim, dim);
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a; b < dim; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += centered(i, a) * centered(i, b);
        cov(a, b) = cov(b, a) = s / denom;
      }
    }
    const SymmetricEigen eig = eigen_symmetric(cov);
    for (std::size_t j = 0; j < spectrum; ++j) out.variances[j] = std::max(eig.values[j], 0.0);
    for (std::size_t j = 0; j < d; ++j) out.basis.set_column(j, eig.vectors.column(j));
  } else {
    // Wide data: eigen-decompose the n x n Gram matrix instead of the
    // dim x dim covariance, then lift eigenvectors back to data space.
    Matrix gram(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        const double s = dot(centered.row(a), centered.row(b));
        gram(a, b) = gram(b, a) = s / denom;
      }
    }
    const SymmetricEigen eig = eigen_symmetric(gram);
    for (std::size_t j = 0; j < spectrum; ++j) out.variances[j] = std::max(eig.values[j], 0.0);
    const double scale_ref = out.variances.empty() ? 0.0 : out.variances[0];
    std::size_t filled = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (out.variances[j] <= 1e-14 * scale_ref) break;
      std::vector<double> axis(dim, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = eig.vectors(i, j);
        if (u == 0.0) continue;
        const auto r = centered.row(i);
        for (std::size_t t = 0; t < dim; ++t) axis[t] += u * r[t];
      }
      const double nn = std::sqrt(norm2(axis));
      if (nn == 0.0) break;
      for (double& v : axis) v /= nn;
      out.basis.set_column(j, axis);
      ++filled;
    }
    if (filled < d) complete_basis(out.basis, filled);
  }
  return out;
}

}  // namespace simplex
