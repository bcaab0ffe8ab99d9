#include "simplex/risk.hpp"

#include <cmath>

namespace simplex {

double loss(const LossSpec& spec, double u) {
  if (spec.kind == LossKind::exponential) {
    return 1.0 - std::exp(-spec.b * u);
  }
  return u > 0.0 ? 1.0 : 0.0;
}

double loss_derivative(const LossSpec& spec, double u) {
  if (spec.kind != LossKind::exponential) {
    throw UnsupportedError("loss_derivative: hard indicator has no derivative");
  }
  return spec.b * std::exp(-spec.b * u);
}

RiskEval evaluate_risk(const Simplex& s, const Dataset& d, const LossSpec& spec) {
  if (d.dim() != s.dim()) throw DimensionError("evaluate_risk: dimension mismatch");
  const std::vector<FacetHyperplane> planes = facet_hyperplanes(s);
  RiskEval out;
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double dist = planar_distance(planes, d.point(i));
    if (dist > 0.0) {
      sum += loss(spec, dist);  // loss(0) is exactly 0 for both kinds
      ++out.exterior_count;
      if (dist > out.max_planar_distance) out.max_planar_distance = dist;
    }
  }
  out.risk = sum / std::sqrt(static_cast<double>(d.size())) + spec.gamma * volume(s);
  return out;
}

double crr_risk(const Simplex& s, const Dataset& d, const LossSpec& spec) {
  return evaluate_risk(s, d, spec).risk;
}

FacetCache::FacetCache(const Simplex& s) : FacetCache(s, facet_hyperplanes(s)) {}

FacetCache::FacetCache(const Simplex& s, std::vector<FacetHyperplane> planes)
    : simplex_(&s), planes_(std::move(planes)) {
  const std::size_t k = s.dim();
  if (planes_.size() != k + 1) {
    throw DimensionError("FacetCache: one hyperplane per facet required");
  }
  diameter_ = diameter_simplex(s);
  tie_tol_ = kTieFactor * diameter_;
  centroids_.resize(k + 1);
  pinv_.resize(k + 1);
  for (std::size_t facet = 0; facet <= k; ++facet) {
    std::vector<double> c(k, 0.0);
    for (std::size_t j = 0; j <= k; ++j) {
      if (j == facet) continue;
      for (std::size_t i = 0; i < k; ++i) c[i] += s.vertices()(i, j);
    }
    for (double& x : c) x /= static_cast<double>(k);
    centroids_[facet] = std::move(c);
  }
}

const Matrix& FacetCache::pseudo_inverse_without(std::size_t facet) const {
  if (!pinv_[facet]) {
    const Simplex& s = *simplex_;
    const std::size_t k = s.dim();
    Matrix reduced(k, k);
    std::size_t c = 0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j == facet) continue;
      for (std::size_t i = 0; i < k; ++i) reduced(i, c) = s.vertices()(i, j);
      ++c;
    }
    pinv_[facet] = pseudo_inverse(reduced, kRankTol);
  }
  return *pinv_[facet];
}

namespace {

/// Adds scale * grad loss(d(x)) into `into`. Returns true when the point
/// contributed (exterior point).
bool accumulate_point_gradient(const FacetCache& cache, std::span<const double> x,
                               const LossSpec& spec, double scale, Matrix& into,
                               GradientDiagnostics* diag) {
  const std::size_t k = cache.simplex().dim();
  const FacetArgmax top = argmax_facet(cache.planes(), x, cache.tie_tol());
  if (top.value <= cache.interior_tol()) {
    return false;  // interior, or close enough to a facet to count as such
  }
  if (diag != nullptr && top.tie) diag->tie = true;

  const double dist = top.value;
  const std::vector<double>& w = cache.planes()[top.index].normal;
  const std::span<const double> centroid = cache.centroid(top.index);

  std::vector<double> pstar;
  if (k == 1) {
    // The nullspace construction degenerates in one dimension; the single
    // facet vertex has affine coordinate 1.
    pstar.assign(1, 1.0);
  } else {
    // x projected onto the facet hyperplane: x - w w^T (x - centroid).
    double offset = 0.0;
    for (std::size_t i = 0; i < k; ++i) offset += w[i] * (x[i] - centroid[i]);
    std::vector<double> projected(k);
    for (std::size_t i = 0; i < k; ++i) projected[i] = x[i] - w[i] * offset;
    pstar = multiply(cache.pseudo_inverse_without(top.index), projected);
  }

  const double factor = -scale * loss_derivative(spec, dist);
  // Column of the result for vertex j: factor * w * p*_idx, with the
  // maximizing facet's own column left zero.
  std::size_t idx = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    if (j == top.index) continue;
    const double pj = pstar[idx++];
    if (pj != 0.0) {
      for (std::size_t i = 0; i < k; ++i) into(i, j) += factor * w[i] * pj;
    }
  }
  return true;
}

}  // namespace

Matrix planar_distance_gradient(const FacetCache& cache, std::span<const double> x,
                                const LossSpec& spec, GradientDiagnostics* diag) {
  if (spec.kind != LossKind::exponential) {
    throw UnsupportedError("planar_distance_gradient: differentiable loss required");
  }
  const std::size_t k = cache.simplex().dim();
  Matrix g(k, k + 1);
  if (accumulate_point_gradient(cache, x, spec, 1.0, g, diag) && diag != nullptr) {
    ++diag->exterior_count;
  }
  return g;
}

Matrix planar_distance_gradient(const Simplex& s,
                                const std::vector<FacetHyperplane>& planes,
                                std::span<const double> x, const LossSpec& spec) {
  const FacetCache cache(s, planes);
  return planar_distance_gradient(cache, x, spec, nullptr);
}

Matrix volume_gradient(const Simplex& s) {
  if (is_degenerate(s)) throw DegeneracyError("volume_gradient: degenerate simplex");
  const std::size_t k = s.dim();
  const Matrix d = edge_matrix(s);
  const Determinant det = determinant_with_sign(d);
  const Matrix adj_t = transpose(adjugate(d));
  const double scale = static_cast<double>(det.sign) / factorial(k);

  Matrix g(k, k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = scale * adj_t(i, j);
      g(i, j + 1) = v;
      row_sum += v;
    }
    g(i, 0) = -row_sum;
  }
  return g;
}

Matrix crr_gradient(const Simplex& s, const Dataset& d, const LossSpec& spec,
                    const std::vector<std::size_t>* active,
                    GradientDiagnostics* diag) {
  if (spec.kind != LossKind::exponential) {
    throw UnsupportedError("crr_gradient: differentiable loss required");
  }
  if (d.dim() != s.dim()) throw DimensionError("crr_gradient: dimension mismatch");

  const FacetCache cache(s);
  const std::size_t k = s.dim();
  Matrix g(k, k + 1);
  // The normalization always uses the full dataset size; an active subset
  // approximates the sum, not the scale.
  const double scale = 1.0 / std::sqrt(static_cast<double>(d.size()));

  std::size_t exterior = 0;
  if (active != nullptr) {
    for (const std::size_t i : *active) {
      if (i >= d.size()) throw DimensionError("crr_gradient: active index out of range");
      exterior += accumulate_point_gradient(cache, d.point(i), spec, scale, g, diag);
    }
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) {
      exterior += accumulate_point_gradient(cache, d.point(i), spec, scale, g, diag);
    }
  }
  if (diag != nullptr) diag->exterior_count += exterior;

  if (spec.gamma != 0.0) {
    const Matrix vg = volume_gradient(s);
    for (std::size_t i = 0; i < g.data().size(); ++i) {
      g.data()[i] += spec.gamma * vg.data()[i];
    }
  }
  return g;
}

}  // namespace simplex
