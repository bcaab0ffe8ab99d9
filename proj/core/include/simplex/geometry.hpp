#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "simplex/dataset.hpp"
#include "simplex/linalg.hpp"

namespace simplex {

/// Volumes below kDegenerateVolumeFactor * diam^K mark a simplex as
/// degenerate (scale-aware test).
inline constexpr double kDegenerateVolumeFactor = 1e-12;

/// Ties in the facet argmax closer than kTieFactor * diam are broken by
/// smallest index and flagged.
inline constexpr double kTieFactor = 1e-12;

/// A K-simplex stored as its vertex matrix: K rows, K+1 columns, column j
/// holding vertex j.
class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(Matrix vertices);

  /// Builds from a list of K+1 vertices, each of length K.
  static Simplex from_vertices(const std::vector<std::vector<double>>& vertices);

  std::size_t dim() const { return vertices_.rows(); }          // K
  std::size_t vertex_count() const { return vertices_.cols(); } // K+1

  const Matrix& vertices() const { return vertices_; }
  Matrix& vertices() { return vertices_; }
  std::vector<double> vertex(std::size_t j) const { return vertices_.column(j); }

 private:
  Matrix vertices_;
};

/// Hyperplane through one facet: unit outward normal w and bias b, with
/// w^T x + b = 0 on the facet and w^T theta_k + b < 0 at the removed vertex.
struct FacetHyperplane {
  std::vector<double> normal;
  double bias = 0.0;
  std::size_t facet_index = 0;
};

struct IsoperimetryReport {
  double lambda_under = 0.0;
  double lambda_bar = 0.0;
};

double factorial(std::size_t k);

/// The K x K matrix with columns theta_j - theta_0, j = 1..K.
Matrix edge_matrix(const Simplex& s);

/// (1/K!) |det[theta_1 - theta_0 | ... | theta_K - theta_0]|.
double volume(const Simplex& s);

/// (K-1)-dimensional measure of facet k, via the Gram determinant of the
/// facet's edge matrix. By convention a single point (K = 1) measures 1.
double facet_volume(const Simplex& s, std::size_t k);

double diameter_simplex(const Simplex& s);
double diameter_dataset(const Dataset& d);

bool is_degenerate(const Simplex& s);

/// One hyperplane per removed vertex, built from the unit nullspace vector
/// of (I - 11^T/K) Theta_{-k}^T and oriented outward. K = 1 is handled
/// directly with normals of +-1.
std::vector<FacetHyperplane> facet_hyperplanes(const Simplex& s);

/// max{0, max_k w_k^T x + b_k}; zero exactly on the simplex.
double planar_distance(const std::vector<FacetHyperplane>& planes,
                       std::span<const double> x);

struct FacetArgmax {
  std::size_t index = 0;
  double value = 0.0;
  bool tie = false;  // another facet lies within tie_tol of the winner
};

/// Maximizing facet of the signed distances; ties within tie_tol resolved
/// by smallest index. The value may be negative (interior point).
FacetArgmax argmax_facet(const std::vector<FacetHyperplane>& planes,
                         std::span<const double> x, double tie_tol = 0.0);

IsoperimetryReport isoperimetry_constants(const Simplex& s);

enum class HullMode { exact, approximate };

/// Indices of (approximate) convex-hull vertices. Exact mode supports
/// dimension <= 3 (monotone chain in 2-D, quickhull in 3-D); approximate
/// mode takes the argmax point along `directions` random unit directions.
std::vector<std::size_t> extreme_points(const Dataset& data, HullMode mode,
                                        std::size_t directions, std::uint64_t seed);

/// Exact hull for dim <= 3, random-direction extremes otherwise
/// (directions = 50 * dim when passed as 0).
std::vector<std::size_t> extreme_points_auto(const Dataset& data,
                                             std::size_t directions,
                                             std::uint64_t seed);

}  // namespace simplex
