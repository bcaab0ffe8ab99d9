#pragma once

#include <optional>
#include <span>
#include <vector>

#include "simplex/dataset.hpp"
#include "simplex/geometry.hpp"

namespace simplex {

enum class LossKind { exponential, hard_indicator };

/// The smoothing function and volume weight defining the relaxed risk.
/// The hard indicator is evaluation-only; it has no derivative.
struct LossSpec {
  LossKind kind = LossKind::exponential;
  double b = 1.0;      // exponential rate, > 0
  double gamma = 0.0;  // volume weight, >= 0
};

/// exponential: 1 - exp(-b u); hard: step at zero.
double loss(const LossSpec& spec, double u);

/// exponential: b exp(-b u); hard indicator throws UnsupportedError.
double loss_derivative(const LossSpec& spec, double u);

/// (1/sqrt(n)) sum_i loss(d(X_i)) + gamma * Vol(S).
double crr_risk(const Simplex& s, const Dataset& d, const LossSpec& spec);

/// One-pass variant used by the optimizer trace.
struct RiskEval {
  double risk = 0.0;
  double max_planar_distance = 0.0;
  std::size_t exterior_count = 0;
};
RiskEval evaluate_risk(const Simplex& s, const Dataset& d, const LossSpec& spec);

/// Facet data shared across all points of one gradient evaluation:
/// hyperplanes plus, per facet, the centroid and a lazily-built
/// pseudo-inverse of Theta with that column removed.
class FacetCache {
 public:
  explicit FacetCache(const Simplex& s);
  FacetCache(const Simplex& s, std::vector<FacetHyperplane> planes);

  const Simplex& simplex() const { return *simplex_; }
  const std::vector<FacetHyperplane>& planes() const { return planes_; }
  std::span<const double> centroid(std::size_t facet) const { return centroids_[facet]; }
  const Matrix& pseudo_inverse_without(std::size_t facet) const;
  double diameter() const { return diameter_; }
  double tie_tol() const { return tie_tol_; }
  double interior_tol() const { return tie_tol_; }

 private:
  const Simplex* simplex_;
  std::vector<FacetHyperplane> planes_;
  std::vector<std::vector<double>> centroids_;
  mutable std::vector<std::optional<Matrix>> pinv_;
  double diameter_ = 0.0;
  double tie_tol_ = 0.0;
};

struct GradientDiagnostics {
  bool tie = false;                 // some point hit the facet-argmax tie set
  std::size_t exterior_count = 0;  // points with a nonzero distance term
};

/// Gradient of loss(d(x)) w.r.t. the vertex matrix: zero for interior x,
/// otherwise -loss'(d) w p*^T J with the maximizing facet's column zeroed.
Matrix planar_distance_gradient(const FacetCache& cache, std::span<const double> x,
                                const LossSpec& spec,
                                GradientDiagnostics* diag = nullptr);

/// Convenience overload matching the facet-hyperplane signature; builds the
/// shared cache internally.
Matrix planar_distance_gradient(const Simplex& s,
                                const std::vector<FacetHyperplane>& planes,
                                std::span<const double> x, const LossSpec& spec);

/// Gradient of Vol(S) w.r.t. the vertex matrix: (sign/K!) applied to the
/// transposed adjugate of the edge matrix, column 0 carrying the negated
/// column sums. Columns sum to zero.
Matrix volume_gradient(const Simplex& s);

/// (1/sqrt(n)) sum of per-point gradients plus gamma * volume gradient.
/// `active` restricts the data-term sum; n stays the full dataset size.
Matrix crr_gradient(const Simplex& s, const Dataset& d, const LossSpec& spec,
                    const std::vector<std::size_t>* active = nullptr,
                    GradientDiagnostics* diag = nullptr);

}  // namespace simplex
