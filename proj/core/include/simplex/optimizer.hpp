#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "simplex/dataset.hpp"
#include "simplex/geometry.hpp"
#include "simplex/risk.hpp"

namespace simplex {

enum class InitMode { random_points, hull_extremes };
enum class BMode { inverse_diameter, explicit_value };
enum class Acceleration { off, active_set };

struct FitConfig {
  std::size_t iterations = 1000;
  std::optional<double> alpha;  // step size; default 0.1 * diam(D)
  std::optional<double> gamma;  // volume weight; default 1 / Vol(bounding box of D)
  LossKind loss_kind = LossKind::exponential;
  BMode b_mode = BMode::inverse_diameter;
  double b_value = 0.0;  // used when b_mode == explicit_value
  InitMode init = InitMode::hull_extremes;
  Acceleration acceleration = Acceleration::off;
  std::size_t accel_refresh = 50;   // iterations between active-set refreshes
  std::size_t hull_directions = 0;  // 0 -> 50 * K in approximate hull mode
  double perturbation_scale = 1e-9;  // relative to diam(D); applied on degeneracy/ties
  std::uint64_t seed = 0;
  std::optional<double> stop_tol;  // relative risk-change early stop; off by default
  std::optional<Simplex> reference;  // when set, the trace carries vertex errors
};

struct TraceRecord {
  std::size_t iteration = 0;
  double risk = 0.0;
  double volume = 0.0;
  double max_planar_distance = 0.0;
  std::size_t active_size = 0;  // points feeding the gradient's data term
  std::optional<double> vertex_error;
};

struct FitTrace {
  std::vector<TraceRecord> records;  // length = iterations executed + 1
  double b = 0.0;                    // resolved loss rate
  double alpha = 0.0;                // resolved step
  double gamma = 0.0;                // resolved volume weight
  std::size_t perturbations = 0;     // noise injections by the degeneracy guard
  bool stopped_early = false;
};

struct FitResult {
  Simplex estimate;
  FitTrace trace;
};

/// Optimization failure that still carries the trace recorded so far.
class FitError : public Error {
 public:
  FitError(const std::string& what, FitTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const FitTrace& trace() const { return trace_; }

 private:
  FitTrace trace_;
};

/// Initial simplex from K+1 distinct dataset points, drawn either from the
/// whole dataset or from the (approximate) hull vertices; degenerate draws
/// are retried, then rescued with a small Gaussian perturbation.
Simplex initialize(const Dataset& d, std::size_t k, const FitConfig& cfg);

/// Indices feeding the accelerated gradient: the (approximate) extreme
/// points of the data. With n <= K+1 every index is returned.
std::vector<std::size_t> active_set(const Dataset& d, std::size_t k,
                                    const FitConfig& cfg);

/// Gradient descent on the relaxed risk: T steps of
/// Theta <- Theta - alpha * grad, with iteration tracing, optional
/// active-set acceleration, and a noise guard for the measure-zero
/// ill-conditioned set.
FitResult fit(const Dataset& d, std::size_t k, const FitConfig& cfg);

}  // namespace simplex
