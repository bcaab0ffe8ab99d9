#pragma once

#include <cstdint>
#include <vector>

#include "simplex/dataset.hpp"
#include "simplex/geometry.hpp"

namespace simplex {

/// Permutation-matched vertex error: error^2 is the assignment minimum of
/// (1/(K(K+1))) sum_k |theta_k - theta_hat_{i_k}|^2.
struct ErrorReport {
  double error = 0.0;
  std::vector<std::size_t> matching;  // matching[k] = estimate vertex paired with true vertex k
  double normalized_error = 0.0;      // error / diameter of the reference simplex
};

/// Exact minimizer over all vertex permutations, solved as a linear
/// assignment on the squared-distance cost matrix.
ErrorReport vertex_error(const Simplex& s_true, const Simplex& s_est);

/// O(n^3) shortest-augmenting-path solver for a square min-cost assignment;
/// returns row -> column. Exposed for reuse and direct testing.
std::vector<std::size_t> solve_assignment(const Matrix& cost);

/// Monte-Carlo total-variation distance between the uniform laws on two
/// simplices, via 1 - Vol(intersection)/max(volumes). Samples come from the
/// larger-volume simplex so the estimator is a plain binomial proportion.
struct TvEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};
TvEstimate tv_distance_mc(const Simplex& s1, const Simplex& s2, std::size_t m,
                          std::uint64_t seed);

/// Unique weights p with Theta p = x and sum(p) = 1; entries go negative
/// outside the simplex.
std::vector<double> barycentric_coordinates(const Simplex& s,
                                            std::span<const double> x);

/// Fraction of points with planar distance at most tol * diam(s).
double containment_fraction(const Simplex& s, const Dataset& d, double tol);

}  // namespace simplex
