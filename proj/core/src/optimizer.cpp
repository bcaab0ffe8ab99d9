#include "simplex/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplex/metrics.hpp"
#include "simplex/rng.hpp"

namespace simplex {

namespace {

// Sub-seed streams hanging off FitConfig::seed.
constexpr std::uint64_t kStreamInit = 0;
constexpr std::uint64_t kStreamInitHull = 1;
constexpr std::uint64_t kStreamGuard = 2;
constexpr std::uint64_t kStreamActiveBase = 3;

Simplex simplex_from_rows(const Dataset& d, const std::vector<std::size_t>& ids,
                          std::size_t k) {
  Matrix v(k, k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    const auto p = d.point(ids[j]);
    for (std::size_t i = 0; i < k; ++i) v(i, j) = p[i];
  }
  return Simplex(std::move(v));
}

void perturb(Simplex& s, Rng& rng, double scale) {
  for (double& x : s.vertices().data()) x += scale * rng.normal();
}

double bounding_box_volume(const Dataset& d, double diam) {
  double vol = 1.0;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    double lo = d.points(0, j), hi = d.points(0, j);
    for (std::size_t i = 1; i < d.size(); ++i) {
      lo = std::min(lo, d.points(i, j));
      hi = std::max(hi, d.points(i, j));
    }
    vol *= std::max(hi - lo, 1e-9 * diam);
  }
  return vol;
}

}  // namespace

Simplex initialize(const Dataset& d, std::size_t k, const FitConfig& cfg) {
  if (k < 1) throw DomainError("initialize: k must be at least 1");
  if (d.dim() != k) throw DimensionError("initialize: data dimension must equal k");
  if (d.size() < k + 1) throw DomainError("initialize: insufficient data (n < K+1)");

  std::vector<std::size_t> pool(d.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (cfg.init == InitMode::hull_extremes) {
    std::vector<std::size_t> hull = extreme_points_auto(
        d, cfg.hull_directions, Rng::derive(cfg.seed, kStreamInitHull));
    if (hull.size() >= k + 1) pool = std::move(hull);
  }

  Rng rng(Rng::derive(cfg.seed, kStreamInit));
  const double diam = diameter_dataset(d);

  std::vector<std::size_t> chosen(k + 1);
  Simplex candidate;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> deck = pool;
    for (std::size_t t = 0; t <= k; ++t) {
      const std::size_t pick = t + rng.uniform_index(deck.size() - t);
      std::swap(deck[t], deck[pick]);
      chosen[t] = deck[t];
    }
    candidate = simplex_from_rows(d, chosen, k);
    if (!is_degenerate(candidate)) return candidate;
  }

  // Data may simply not contain K+1 points in general position; rescue the
  // last draw with noise.
  perturb(candidate, rng, cfg.perturbation_scale * diam);
  if (!is_degenerate(candidate)) return candidate;
  throw DegeneracyError("initialize: persistent degeneracy");
}

std::vector<std::size_t> active_set(const Dataset& d, std::size_t k,
                                    const FitConfig& cfg) {
  if (d.size() < k + 1) throw DomainError("active_set: insufficient data (n < K+1)");
  if (d.size() <= k + 1) {
    std::vector<std::size_t> all(d.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  return extreme_points_auto(d, cfg.hull_directions,
                             Rng::derive(cfg.seed, kStreamActiveBase));
}

FitResult fit(const Dataset& d, std::size_t k, const FitConfig& cfg) {
  if (cfg.loss_kind != LossKind::exponential) {
    throw UnsupportedError("fit: exponential loss required");
  }
  if (d.size() < k + 1) throw DomainError("fit: insufficient data (n < K+1)");
  if (cfg.reference && cfg.reference->dim() != k) {
    throw DimensionError("fit: reference dimension mismatch");
  }

  const double diam = diameter_dataset(d);
  if (diam == 0.0) throw DegeneracyError("fit: all data points coincide");

  LossSpec spec;
  spec.kind = LossKind::exponential;
  spec.b = cfg.b_mode == BMode::inverse_diameter ? 1.0 / diam : cfg.b_value;
  if (spec.b <= 0.0) throw DomainError("fit: loss rate b must be positive");
  spec.gamma = cfg.gamma.value_or(1.0 / bounding_box_volume(d, diam));
  if (spec.gamma < 0.0) throw DomainError("fit: gamma must be non-negative");
  const double alpha = cfg.alpha.value_or(0.1 * diam);
  if (alpha <= 0.0) throw DomainError("fit: alpha must be positive");

  FitTrace trace;
  trace.b = spec.b;
  trace.alpha = alpha;
  trace.gamma = spec.gamma;

  Simplex s = initialize(d, k, cfg);

  std::vector<std::size_t> active;
  const bool accelerated = cfg.acceleration == Acceleration::active_set;
  if (accelerated) active = active_set(d, k, cfg);

  const auto record = [&](std::size_t iteration) {
    const RiskEval eval = evaluate_risk(s, d, spec);
    TraceRecord rec;
    rec.iteration = iteration;
    rec.risk = eval.risk;
    rec.volume = volume(s);
    rec.max_planar_distance = eval.max_planar_distance;
    rec.active_size = accelerated ? active.size() : d.size();
    if (cfg.reference) rec.vertex_error = vertex_error(*cfg.reference, s).error;
    trace.records.push_back(rec);
  };

  Rng guard_rng(Rng::derive(cfg.seed, kStreamGuard));
  record(0);

  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    if (accelerated && cfg.accel_refresh > 0 && t > 0 && t % cfg.accel_refresh == 0) {
      const std::uint64_t refresh = t / cfg.accel_refresh;
      active = extreme_points_auto(
          d, cfg.hull_directions, Rng::derive(cfg.seed, kStreamActiveBase + refresh));
    }

    // Gradient evaluation guarded against the measure-zero ill-conditioned
    // set: on degeneracy or an argmax tie, jitter the vertices and retry.
    Matrix gradient;
    bool have_gradient = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      GradientDiagnostics diag;
      try {
        gradient = crr_gradient(s, d, spec, accelerated ? &active : nullptr, &diag);
      } catch (const DegeneracyError&) {
        if (cfg.perturbation_scale <= 0.0) {
          throw FitError("fit: degenerate simplex and no perturbation guard",
                         std::move(trace));
        }
        perturb(s, guard_rng, cfg.perturbation_scale * diam);
        ++trace.perturbations;
        continue;
      }
      if (diag.tie && cfg.perturbation_scale > 0.0 && attempt + 1 < 100) {
        perturb(s, guard_rng, cfg.perturbation_scale * diam);
        ++trace.perturbations;
        continue;  // the gradient was computed for the pre-jitter vertices
      }
      have_gradient = true;
      break;
    }
    if (!have_gradient) {
      throw FitError("fit: degenerate simplex persisted after perturbation",
                     std::move(trace));
    }

    for (std::size_t i = 0; i < gradient.data().size(); ++i) {
      s.vertices().data()[i] -= alpha * gradient.data()[i];
    }

    // The step itself can land on the degenerate set; rescue before the
    // trace evaluates the new state.
    if (is_degenerate(s)) {
      if (cfg.perturbation_scale <= 0.0) {
        throw FitError("fit: update produced a degenerate simplex", std::move(trace));
      }
      bool rescued = false;
      for (int attempt = 0; attempt < 100; ++attempt) {
        perturb(s, guard_rng, cfg.perturbation_scale * diam);
        ++trace.perturbations;
        if (!is_degenerate(s)) {
          rescued = true;
          break;
        }
      }
      if (!rescued) {
        throw FitError("fit: degenerate simplex persisted after perturbation",
                       std::move(trace));
      }
    }
    record(t + 1);

    if (cfg.stop_tol) {
      const double prev = trace.records[trace.records.size() - 2].risk;
      const double cur = trace.records.back().risk;
      const double rel = std::abs(cur - prev) / std::max(std::abs(prev), 1e-300);
      if (rel < *cfg.stop_tol) {
        trace.stopped_early = true;
        break;
      }
    }
  }

  return {std::move(s), std::move(trace)};
}

}  // namespace simplex
