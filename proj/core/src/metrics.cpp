#include "simplex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplex/rng.hpp"

namespace simplex {

std::vector<std::size_t> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    throw DimensionError("solve_assignment: square cost matrix required");
  }
  const std::size_t n = cost.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials u (rows) and v (columns), with a virtual column n.
  std::vector<double> u(n, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> matched(n + 1, n);  // matched[j] = row on column j, n = free
  std::vector<std::size_t> way(n + 1, n);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j0 = n;
    matched[n] = i;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = matched[j0];
      double delta = kInf;
      std::size_t j1 = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[matched[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched[j0] != n);
    do {
      const std::size_t j1 = way[j0];
      matched[j0] = matched[j1];
      j0 = j1;
    } while (j0 != n);
  }

  std::vector<std::size_t> row_to_col(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (matched[j] != n) row_to_col[matched[j]] = j;
  }
  return row_to_col;
}

ErrorReport vertex_error(const Simplex& s_true, const Simplex& s_est) {
  if (s_true.dim() != s_est.dim()) {
    throw DimensionError("vertex_error: dimension mismatch");
  }
  const std::size_t m = s_true.vertex_count();
  Matrix cost(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto va = s_true.vertex(a);
    for (std::size_t b = 0; b < m; ++b) {
      cost(a, b) = distance2(va, s_est.vertex(b));
    }
  }
  ErrorReport rep;
  rep.matching = solve_assignment(cost);
  double total = 0.0;
  for (std::size_t a = 0; a < m; ++a) total += cost(a, rep.matching[a]);
  const double k = static_cast<double>(s_true.dim());
  rep.error = std::sqrt(std::max(total, 0.0) / (k * (k + 1.0)));
  const double diam = diameter_simplex(s_true);
  rep.normalized_error = diam > 0.0 ? rep.error / diam : rep.error;
  return rep;
}

TvEstimate tv_distance_mc(const Simplex& s1, const Simplex& s2, std::size_t m,
                          std::uint64_t seed) {
  if (s1.dim() != s2.dim()) throw DimensionError("tv_distance_mc: dimension mismatch");
  if (m < 1) throw DomainError("tv_distance_mc: need at least one sample");
  if (is_degenerate(s1) || is_degenerate(s2)) {
    throw DegeneracyError("tv_distance_mc: degenerate simplex");
  }

  const double v1 = volume(s1);
  const double v2 = volume(s2);
  const Simplex& big = v1 >= v2 ? s1 : s2;
  const Simplex& other = v1 >= v2 ? s2 : s1;
  const std::vector<FacetHyperplane> planes = facet_hyperplanes(other);

  const std::size_t k = big.dim();
  Rng rng(seed);
  std::vector<double> p(k + 1), x(k);
  std::size_t inside = 0;
  for (std::size_t trial = 0; trial < m; ++trial) {
    double total = 0.0;
    for (double& pj : p) {
      pj = rng.exponential();
      total += pj;
    }
    for (std::size_t r = 0; r < k; ++r) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= k; ++j) acc += big.vertices()(r, j) * p[j] / total;
      x[r] = acc;
    }
    if (planar_distance(planes, x) == 0.0) ++inside;
  }

  const double frac = static_cast<double>(inside) / static_cast<double>(m);
  TvEstimate est;
  est.estimate = 1.0 - frac;
  est.std_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(m));
  return est;
}

std::vector<double> barycentric_coordinates(const Simplex& s,
                                            std::span<const double> x) {
  const std::size_t k = s.dim();
  if (x.size() != k) throw DimensionError("barycentric_coordinates: point length");
  Matrix a(k + 1, k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= k; ++j) a(i, j) = s.vertices()(i, j);
  }
  for (std::size_t j = 0; j <= k; ++j) a(k, j) = 1.0;
  std::vector<double> rhs(k + 1);
  for (std::size_t i = 0; i < k; ++i) rhs[i] = x[i];
  rhs[k] = 1.0;
  try {
    return solve(a, rhs);
  } catch (const DegeneracyError&) {
    throw DegeneracyError("barycentric_coordinates: degenerate simplex");
  }
}

double containment_fraction(const Simplex& s, const Dataset& d, double tol) {
  if (d.dim() != s.dim()) throw DimensionError("containment_fraction: dimension mismatch");
  if (d.size() == 0) return 0.0;
  const std::vector<FacetHyperplane> planes = facet_hyperplanes(s);
  const double threshold = tol * diameter_simplex(s);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (planar_distance(planes, d.point(i)) <= threshold) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(d.size());
}

}  // namespace simplex
