#include "simplex/sampling.hpp"

#include <cmath>

namespace simplex {

UniformSample sample_uniform_with_weights(const Simplex& s, std::size_t n,
                                          std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_uniform: n must be at least 1");
  if (is_degenerate(s)) throw DegeneracyError("sample_uniform: degenerate simplex");

  const std::size_t k = s.dim();
  Rng rng(seed);
  UniformSample out;
  out.data.points = Matrix(n, k);
  out.weights = Matrix(n, k + 1);

  std::vector<double> p(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (double& pj : p) {
      pj = rng.exponential();
      total += pj;
    }
    for (double& pj : p) pj /= total;
    for (std::size_t j = 0; j <= k; ++j) out.weights(i, j) = p[j];
    for (std::size_t r = 0; r < k; ++r) {
      double x = 0.0;
      for (std::size_t j = 0; j <= k; ++j) x += s.vertices()(r, j) * p[j];
      out.data.points(i, r) = x;
    }
  }
  return out;
}

Dataset sample_uniform(const Simplex& s, std::size_t n, std::uint64_t seed) {
  return sample_uniform_with_weights(s, n, seed).data;
}

double mean_pairwise_vertex_distance(const Simplex& s) {
  const std::size_t m = s.vertex_count();
  double sum = 0.0;
  for (std::size_t a = 0; a + 1 < m; ++a) {
    const auto va = s.vertex(a);
    for (std::size_t b = a + 1; b < m; ++b) {
      sum += std::sqrt(distance2(va, s.vertex(b)));
    }
  }
  // 2 * sum over unordered pairs == sum over the K(K+1) ordered pairs.
  const double k = static_cast<double>(s.dim());
  return 2.0 * sum / (k * (k + 1.0));
}

double noise_sigma(const Simplex& s, double rho) {
  if (rho < 0.0) throw DomainError("noise_sigma: rho must be non-negative");
  return rho * mean_pairwise_vertex_distance(s);
}

Dataset add_noise(const Dataset& d, const Simplex& s_ref, const NoiseConfig& cfg) {
  if (d.dim() != s_ref.dim()) throw DimensionError("add_noise: dimension mismatch");
  if (cfg.rho == 0.0) return d;
  const double sigma = noise_sigma(s_ref, cfg.rho);

  Dataset out = d;
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto row = out.points.row(i);
    for (double& x : row) x += sigma * rng.normal();
  }
  return out;
}

namespace {

/// Regular simplex with side d: vertex j is d/sqrt(2) times column j of the
/// Helmert matrix, an orthonormal basis of the hyperplane 1^T x = 0. The
/// scaled standard-basis vectors e_j d/sqrt(2) in R^{K+1} have all pairwise
/// distances d, and the Helmert rows express them in K coordinates.
Simplex regular_simplex(std::size_t k, double side) {
  Matrix v(k, k + 1);
  const double scale = side / std::sqrt(2.0);
  for (std::size_t r = 1; r <= k; ++r) {
    const double denom = std::sqrt(static_cast<double>(r) * (r + 1.0));
    for (std::size_t j = 0; j <= k; ++j) {
      double h = 0.0;
      if (j < r) {
        h = 1.0 / denom;
      } else if (j == r) {
        h = -static_cast<double>(r) / denom;
      }
      v(r - 1, j) = scale * h;
    }
  }
  return Simplex(std::move(v));
}

}  // namespace

Simplex random_simplex(std::size_t k, SimplexKind kind, double param,
                       std::uint64_t seed) {
  if (k < 1) throw DomainError("random_simplex: k must be at least 1");
  if (kind == SimplexKind::regular) {
    if (param <= 0.0) throw DomainError("random_simplex: side must be positive");
    return regular_simplex(k, param);
  }
  if (param <= 0.0) throw DomainError("random_simplex: scale must be positive");
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix v(k, k + 1);
    for (double& x : v.data()) x = param * rng.normal();
    Simplex s(std::move(v));
    if (!is_degenerate(s)) return s;
  }
  throw DegeneracyError("random_simplex: persistent degeneracy");
}

}  // namespace simplex
