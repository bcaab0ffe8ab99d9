#pragma once

#include <cstdint>

#include "simplex/dataset.hpp"
#include "simplex/geometry.hpp"
#include "simplex/rng.hpp"

namespace simplex {

struct NoiseConfig {
  double rho = 0.0;  // noise strength: sigma normalized by the mean pairwise vertex distance
  std::uint64_t seed = 0;
};

/// n i.i.d. points uniform over the simplex: X = Theta p with p drawn from
/// the flat Dirichlet (normalized unit-rate exponentials).
Dataset sample_uniform(const Simplex& s, std::size_t n, std::uint64_t seed);

/// Same stream as sample_uniform, additionally returning the generating
/// weight vectors, one row per sample.
struct UniformSample {
  Dataset data;
  Matrix weights;  // n x (K+1)
};
UniformSample sample_uniform_with_weights(const Simplex& s, std::size_t n,
                                          std::uint64_t seed);

/// Mean distance over the K(K+1) ordered distinct vertex pairs; the
/// normalizer in the noise-strength definition.
double mean_pairwise_vertex_distance(const Simplex& s);

/// sigma = rho * mean pairwise vertex distance.
double noise_sigma(const Simplex& s, double rho);

/// Adds i.i.d. N(0, sigma^2 I) to every point; rho = 0 returns the input
/// unchanged without touching the random stream.
Dataset add_noise(const Dataset& d, const Simplex& s_ref, const NoiseConfig& cfg);

enum class SimplexKind { regular, gaussian_vertices };

/// regular: all pairwise vertex distances equal `param` (standard-basis
/// embedding brought down to R^K); gaussian_vertices: i.i.d. N(0, param^2)
/// entries, redrawn until non-degenerate.
Simplex random_simplex(std::size_t k, SimplexKind kind, double param,
                       std::uint64_t seed);

}  // namespace simplex
