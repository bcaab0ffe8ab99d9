#pragma once

#include <cstdint>
#include <vector>

#include "simplex/optimizer.hpp"
#include "simplex/sampling.hpp"

namespace simplex {

/// Shared configuration for the synthetic gen -> fit -> eval sweeps.
struct ExperimentConfig {
  double epsilon = 0.05;  // target TV accuracy, reported against in summaries
  double zeta = 0.05;     // failure probability budget
  std::size_t trials = 1;

  std::vector<double> rho_grid;       // noise sweep
  std::vector<std::size_t> k_grid;    // dimension sweep
  double scale_c = 40.0;              // dimension sweep: n = ceil(c K^2 ln K)

  std::size_t k = 2;    // noise sweep dimension
  std::size_t n = 100;  // noise sweep dataset size

  SimplexKind kind = SimplexKind::regular;
  double kind_param = 1.0;  // side (regular) or scale (gaussian)

  std::size_t tv_samples = 20000;
  std::uint64_t seed = 0;
  FitConfig fit;  // per-trial seed and reference fields are overridden
};

struct SweepRow {
  double grid_value = 0.0;  // rho for the noise sweep, K for the dimension sweep
  std::size_t n = 0;
  std::size_t trial = 0;
  double error = 0.0;
  double normalized_error = 0.0;
  double tv = 0.0;
  double runtime_seconds = 0.0;
  bool failed = false;
};

struct SweepSummary {
  double grid_value = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_normalized_error = 0.0;
  double mean_tv = 0.0;
  double frac_tv_within_epsilon = 0.0;  // share of trials with tv <= epsilon
};

/// One gen -> fit -> eval run; exposed so the CLI and tests share the exact
/// library path.
SweepRow run_trial(const ExperimentConfig& cfg, std::size_t k, std::size_t n,
                   double rho, double grid_value, std::size_t trial,
                   std::uint64_t trial_seed);

/// Noise sweep over rho_grid (fixed k, n); failed trials are kept as
/// flagged rows and do not abort the sweep.
std::vector<SweepRow> sweep_noise(const ExperimentConfig& cfg);

/// Dimension sweep over k_grid with n = ceil(c K^2 ln K), noiseless data.
std::vector<SweepRow> sweep_dim(const ExperimentConfig& cfg);

/// Per-grid-value mean/std summary over the non-failed rows.
std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows,
                                    double epsilon);

/// Fixed sub-seed for (grid cell, trial); adding trials or grid cells never
/// perturbs earlier ones.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t grid_index,
                         std::size_t trial);

}  // namespace simplex
