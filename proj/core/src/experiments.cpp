#include "simplex/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "simplex/metrics.hpp"
#include "simplex/rng.hpp"

namespace simplex {

namespace {

void validate_common(const ExperimentConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) {
    throw DomainError("experiment: epsilon must lie in (0, 1]");
  }
  if (!(cfg.zeta > 0.0 && cfg.zeta < 1.0)) {
    throw DomainError("experiment: zeta must lie in (0, 1)");
  }
  if (cfg.trials < 1) throw DomainError("experiment: trials must be at least 1");
  if (cfg.tv_samples < 1) throw DomainError("experiment: tv_samples must be at least 1");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t grid_index,
                         std::size_t trial) {
  return Rng::derive(Rng::derive(seed, 0x677269 + grid_index), trial);
}

SweepRow run_trial(const ExperimentConfig& cfg, std::size_t k, std::size_t n,
                   double rho, double grid_value, std::size_t trial,
                   std::uint64_t seed) {
  SweepRow row;
  row.grid_value = grid_value;
  row.n = n;
  row.trial = trial;

  const auto start = std::chrono::steady_clock::now();
  try {
    const Simplex truth =
        random_simplex(k, cfg.kind, cfg.kind_param, Rng::derive(seed, 0));
    Dataset data = sample_uniform(truth, n, Rng::derive(seed, 1));
    if (rho > 0.0) {
      data = add_noise(data, truth, NoiseConfig{rho, Rng::derive(seed, 2)});
    }
    FitConfig fit_cfg = cfg.fit;
    fit_cfg.seed = Rng::derive(seed, 3);
    fit_cfg.reference.reset();  // per-iteration reference errors are not needed here
    const FitResult result = fit(data, k, fit_cfg);

    const ErrorReport rep = vertex_error(truth, result.estimate);
    const TvEstimate tv =
        tv_distance_mc(truth, result.estimate, cfg.tv_samples, Rng::derive(seed, 4));
    row.error = rep.error;
    row.normalized_error = rep.normalized_error;
    row.tv = tv.estimate;
  } catch (const Error&) {
    row.failed = true;
    row.error = std::numeric_limits<double>::quiet_NaN();
    row.normalized_error = std::numeric_limits<double>::quiet_NaN();
    row.tv = std::numeric_limits<double>::quiet_NaN();
  }
  row.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SweepRow> sweep_noise(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.rho_grid.empty()) throw DomainError("sweep_noise: empty rho grid");
  for (double rho : cfg.rho_grid) {
    if (rho < 0.0) throw DomainError("sweep_noise: rho must be non-negative");
  }
  if (cfg.k < 1) throw DomainError("sweep_noise: k must be at least 1");
  if (cfg.n < cfg.k + 1) throw DomainError("sweep_noise: n must be at least K+1");

  std::vector<SweepRow> rows;
  rows.reserve(cfg.rho_grid.size() * cfg.trials);
  for (std::size_t g = 0; g < cfg.rho_grid.size(); ++g) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      rows.push_back(run_trial(cfg, cfg.k, cfg.n, cfg.rho_grid[g], cfg.rho_grid[g],
                               t, trial_seed(cfg.seed, g, t)));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_dim(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.k_grid.empty()) throw DomainError("sweep_dim: empty K grid");
  if (cfg.scale_c <= 0.0) throw DomainError("sweep_dim: c must be positive");
  for (std::size_t k : cfg.k_grid) {
    if (k < 2) throw DomainError("sweep_dim: K grid entries must be at least 2");
  }

  std::vector<SweepRow> rows;
  rows.reserve(cfg.k_grid.size() * cfg.trials);
  for (std::size_t g = 0; g < cfg.k_grid.size(); ++g) {
    const std::size_t k = cfg.k_grid[g];
    const double kk = static_cast<double>(k);
    const std::size_t n = static_cast<std::size_t>(
        std::ceil(cfg.scale_c * kk * kk * std::log(kk)));
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      rows.push_back(run_trial(cfg, k, n, 0.0, kk, t, trial_seed(cfg.seed, g, t)));
    }
  }
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows,
                                    double epsilon) {
  std::map<double, std::vector<const SweepRow*>> groups;
  for (const SweepRow& r : rows) groups[r.grid_value].push_back(&r);

  std::vector<SweepSummary> out;
  for (const auto& [value, group] : groups) {
    SweepSummary s;
    s.grid_value = value;
    s.trials = group.size();
    double sum = 0.0, sum2 = 0.0, sum_norm = 0.0, sum_tv = 0.0;
    std::size_t ok = 0, tv_ok = 0;
    for (const SweepRow* r : group) {
      if (r->failed) {
        ++s.failures;
        continue;
      }
      ++ok;
      sum += r->error;
      sum2 += r->error * r->error;
      sum_norm += r->normalized_error;
      sum_tv += r->tv;
      if (r->tv <= epsilon) ++tv_ok;
    }
    if (ok > 0) {
      const double n = static_cast<double>(ok);
      s.mean_error = sum / n;
      s.std_error = ok > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0)))
                           : 0.0;
      s.mean_normalized_error = sum_norm / n;
      s.mean_tv = sum_tv / n;
      s.frac_tv_within_epsilon = static_cast<double>(tv_ok) / n;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace simplex
