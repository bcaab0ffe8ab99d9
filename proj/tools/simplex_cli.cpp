#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "simplex/experiments.hpp"
#include "simplex/io.hpp"
#include "simplex/metrics.hpp"
#include "simplex/optimizer.hpp"
#include "simplex/rng.hpp"
#include "simplex/sampling.hpp"

namespace {

using namespace simplex;

// Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric/degeneracy.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct GenOptions {
  std::size_t k = 2;
  std::size_t n = 100;
  std::string kind = "regular";
  double side = 1.0;
  double scale = 1.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::string out = "gen";
};

int cmd_gen(const GenOptions& opt) {
  const SimplexKind kind =
      opt.kind == "regular" ? SimplexKind::regular : SimplexKind::gaussian_vertices;
  const double param = kind == SimplexKind::regular ? opt.side : opt.scale;
  const Simplex truth = random_simplex(opt.k, kind, param, Rng::derive(opt.seed, 0));
  Dataset data = sample_uniform(truth, opt.n, Rng::derive(opt.seed, 1));
  const double sigma = noise_sigma(truth, opt.rho);
  if (opt.rho > 0.0) {
    data = add_noise(data, truth, NoiseConfig{opt.rho, Rng::derive(opt.seed, 2)});
  }
  write_simplex_file(opt.out + ".simplex.json", truth);
  write_csv(opt.out + ".data.csv", data.points);
  std::cout << "n=" << opt.n << " k=" << opt.k << " rho=" << format_number(opt.rho)
            << " sigma=" << format_number(sigma)
            << " diameter=" << format_number(diameter_dataset(data)) << '\n';
  return 0;
}

struct FitOptions {
  std::string data_file;
  std::size_t k = 2;
  std::string out = "fit";
  std::size_t iters = 1000;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::string b = "inverse-diam";
  std::string init = "hull";
  std::string accel = "off";
  std::size_t accel_refresh = 50;
  double perturb = 1e-9;
  std::uint64_t seed = 0;
  std::string ref;
  std::optional<double> stop_tol;
};

FitConfig make_fit_config(const FitOptions& opt) {
  FitConfig cfg;
  cfg.iterations = opt.iters;
  cfg.alpha = opt.alpha;
  cfg.gamma = opt.gamma;
  if (opt.b == "inverse-diam") {
    cfg.b_mode = BMode::inverse_diameter;
  } else {
    cfg.b_mode = BMode::explicit_value;
    char* end = nullptr;
    cfg.b_value = std::strtod(opt.b.c_str(), &end);
    if (end != opt.b.c_str() + opt.b.size() || cfg.b_value <= 0.0) {
      throw DomainError("--b expects 'inverse-diam' or a positive number");
    }
  }
  if (opt.init == "random") {
    cfg.init = InitMode::random_points;
  } else if (opt.init == "hull") {
    cfg.init = InitMode::hull_extremes;
  } else {
    throw DomainError("--init expects 'random' or 'hull'");
  }
  if (opt.accel == "on") {
    cfg.acceleration = Acceleration::active_set;
  } else if (opt.accel == "off") {
    cfg.acceleration = Acceleration::off;
  } else {
    throw DomainError("--accel expects 'on' or 'off'");
  }
  cfg.accel_refresh = opt.accel_refresh;
  cfg.perturbation_scale = opt.perturb;
  cfg.seed = opt.seed;
  cfg.stop_tol = opt.stop_tol;
  return cfg;
}

int cmd_fit(const FitOptions& opt) {
  const Dataset data = read_csv(opt.data_file);
  FitConfig cfg = make_fit_config(opt);
  if (!opt.ref.empty()) cfg.reference = read_simplex_file(opt.ref);
  try {
    const FitResult result = fit(data, opt.k, cfg);
    write_simplex_file(opt.out + ".simplex.json", result.estimate);
    write_trace(opt.out + ".trace.csv", result.trace);
  } catch (const FitError& e) {
    write_trace(opt.out + ".trace.csv", e.trace());
    std::cerr << "error: " << e.what() << " (trace written)\n";
    return kExitNumeric;
  }
  return 0;
}

struct EvalOptions {
  std::string truth;
  std::string estimate;
  std::string data;
  std::size_t tv_samples = 100000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out = "eval.json";
};

int cmd_eval(const EvalOptions& opt) {
  const Simplex truth = read_simplex_file(opt.truth);
  const Simplex estimate = read_simplex_file(opt.estimate);
  const ErrorReport rep = vertex_error(truth, estimate);
  const TvEstimate tv = tv_distance_mc(truth, estimate, opt.tv_samples, opt.seed);

  EvalReport report;
  report.k = truth.dim();
  report.error = rep.error;
  report.normalized_error = rep.normalized_error;
  report.tv_estimate = tv.estimate;
  report.tv_std_error = tv.std_error;
  report.tv_samples = opt.tv_samples;
  if (!opt.data.empty()) {
    const Dataset data = read_csv(opt.data);
    report.containment = containment_fraction(estimate, data, opt.tol);
  }
  report.volume_truth = volume(truth);
  report.volume_estimate = volume(estimate);
  report.iso_truth = isoperimetry_constants(truth);
  report.iso_estimate = isoperimetry_constants(estimate);
  write_eval_report(opt.out, report);
  return 0;
}

struct SweepOptions {
  std::string grid;
  std::size_t trials = 10;
  std::size_t k = 2;
  std::size_t n = 100;
  double c = 40.0;
  std::string kind = "regular";
  double side = 1.0;
  double scale = 1.0;
  std::size_t tv_samples = 20000;
  double epsilon = 0.05;
  double zeta = 0.05;
  std::uint64_t seed = 0;
  std::string out = "sweep.csv";
  FitOptions fit;
};

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> values;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size()) {
      throw DomainError("--grid: bad entry '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DomainError("--grid: empty grid");
  return values;
}

ExperimentConfig make_experiment_config(const SweepOptions& opt) {
  ExperimentConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.zeta = opt.zeta;
  cfg.trials = opt.trials;
  cfg.k = opt.k;
  cfg.n = opt.n;
  cfg.scale_c = opt.c;
  cfg.kind = opt.kind == "regular" ? SimplexKind::regular : SimplexKind::gaussian_vertices;
  cfg.kind_param = cfg.kind == SimplexKind::regular ? opt.side : opt.scale;
  cfg.tv_samples = opt.tv_samples;
  cfg.seed = opt.seed;
  cfg.fit = make_fit_config(opt.fit);
  return cfg;
}

void write_sweep_csv(const std::string& path, const std::string& grid_name,
                     const std::vector<SweepRow>& rows, double epsilon) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << grid_name << ",n,trial,error,normalized_error,tv,runtime_seconds,failed\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.grid_value) << ',' << r.n << ',' << r.trial << ','
        << format_number(r.error) << ',' << format_number(r.normalized_error) << ','
        << format_number(r.tv) << ',' << format_number(r.runtime_seconds) << ','
        << (r.failed ? 1 : 0) << '\n';
  }
  for (const SweepSummary& s : summarize(rows, epsilon)) {
    out << "# " << grid_name << '=' << format_number(s.grid_value)
        << " trials=" << s.trials << " failures=" << s.failures
        << " mean_error=" << format_number(s.mean_error)
        << " std_error=" << format_number(s.std_error)
        << " mean_normalized_error=" << format_number(s.mean_normalized_error)
        << " mean_tv=" << format_number(s.mean_tv)
        << " frac_tv_within_epsilon=" << format_number(s.frac_tv_within_epsilon)
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

int cmd_sweep_noise(const SweepOptions& opt) {
  ExperimentConfig cfg = make_experiment_config(opt);
  cfg.rho_grid = parse_grid(opt.grid);
  const std::vector<SweepRow> rows = sweep_noise(cfg);
  write_sweep_csv(opt.out, "rho", rows, cfg.epsilon);
  return 0;
}

int cmd_sweep_dim(const SweepOptions& opt) {
  ExperimentConfig cfg = make_experiment_config(opt);
  for (double v : parse_grid(opt.grid)) {
    if (v < 2.0 || v != std::floor(v)) {
      throw DomainError("sweep-dim: K grid entries must be integers >= 2");
    }
    cfg.k_grid.push_back(static_cast<std::size_t>(v));
  }
  const std::vector<SweepRow> rows = sweep_dim(cfg);
  write_sweep_csv(opt.out, "k", rows, cfg.epsilon);
  return 0;
}

struct PcaOptions {
  std::string data_file;
  std::size_t dim = 2;
  std::string out = "pca";
};

int cmd_pca(const PcaOptions& opt) {
  const Dataset data = read_csv(opt.data_file);
  if (opt.dim < 1 || data.size() < 2 ||
      opt.dim > std::min(data.size() - 1, data.dim())) {
    throw DomainError("--dim must lie in [1, min(n-1, ambient dimension)]");
  }
  const Pca model = principal_components(data.points, opt.dim);
  Matrix projected(data.size(), opt.dim);
  std::vector<double> centered(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t j = 0; j < data.dim(); ++j) centered[j] = p[j] - model.mean[j];
    for (std::size_t c = 0; c < opt.dim; ++c) {
      projected(i, c) = dot(centered, model.basis.column(c));
    }
  }
  write_csv(opt.out + ".data.csv", projected);
  write_pca_model(opt.out + ".basis.json", model);
  return 0;
}

struct WeightsOptions {
  std::string simplex_file;
  std::string data_file;
  double tol = 1e-9;
  std::string out = "weights.csv";
};

int cmd_weights(const WeightsOptions& opt) {
  const Simplex s = read_simplex_file(opt.simplex_file);
  const Dataset data = read_csv(opt.data_file);
  if (data.dim() != s.dim()) {
    throw DimensionError("weights: data dimension does not match simplex");
  }
  std::ofstream out(opt.out);
  if (!out) throw IoError("cannot open for writing: " + opt.out);
  for (std::size_t j = 0; j <= s.dim(); ++j) out << "w" << j << ',';
  out << "negative_flag\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::vector<double> p = barycentric_coordinates(s, data.point(i));
    bool negative = false;
    for (double w : p) {
      if (w < -opt.tol) negative = true;
    }
    for (double w : p) out << format_number(w) << ',';
    out << (negative ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed: " + opt.out);
  return 0;
}

void add_fit_flags(CLI::App* app, FitOptions& opt) {
  app->add_option("--iters", opt.iters, "Gradient-descent iterations");
  app->add_option("--alpha", opt.alpha, "Step size (default 0.1 * diam)");
  app->add_option("--gamma", opt.gamma, "Volume weight (default 1/Vol(bbox))");
  app->add_option("--b", opt.b, "'inverse-diam' or an explicit positive rate");
  app->add_option("--init", opt.init, "Initialization: random|hull");
  app->add_option("--accel", opt.accel, "Active-set acceleration: off|on");
  app->add_option("--accel-refresh", opt.accel_refresh, "Iterations between refreshes");
  app->add_option("--perturb", opt.perturb, "Degeneracy-guard noise scale (relative)");
  app->add_option("--stop-tol", opt.stop_tol, "Early stop on relative risk change");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplex learning from interior samples: synthetic data, "
               "gradient-descent fitting, evaluation, and sweep experiments"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a simplex and samples");
  gen_cmd->add_option("--k", gen.k, "Dimension K")->required();
  gen_cmd->add_option("--n", gen.n, "Sample count")->required();
  gen_cmd->add_option("--kind", gen.kind, "Simplex kind: regular|gaussian")
      ->check(CLI::IsMember({"regular", "gaussian"}));
  gen_cmd->add_option("--side", gen.side, "Side length for the regular kind");
  gen_cmd->add_option("--scale", gen.scale, "Vertex scale for the gaussian kind");
  gen_cmd->add_option("--rho", gen.rho, "Noise strength (default 0)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output prefix");

  FitOptions fitopt;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a simplex to a data CSV");
  fit_cmd->add_option("data", fitopt.data_file, "Input data CSV")->required();
  fit_cmd->add_option("--k", fitopt.k, "Dimension K")->required();
  fit_cmd->add_option("--seed", fitopt.seed, "Random seed");
  fit_cmd->add_option("--out", fitopt.out, "Output prefix");
  fit_cmd->add_option("--ref", fitopt.ref, "Reference simplex for trace errors");
  add_fit_flags(fit_cmd, fitopt);

  EvalOptions evalopt;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare an estimate to the truth");
  eval_cmd->add_option("--truth", evalopt.truth, "True simplex file")->required();
  eval_cmd->add_option("--estimate", evalopt.estimate, "Estimated simplex file")->required();
  eval_cmd->add_option("--data", evalopt.data, "Optional data CSV for containment");
  eval_cmd->add_option("--tv-samples", evalopt.tv_samples, "Monte-Carlo TV samples");
  eval_cmd->add_option("--tol", evalopt.tol, "Containment tolerance (relative)");
  eval_cmd->add_option("--seed", evalopt.seed, "Random seed");
  eval_cmd->add_option("--out", evalopt.out, "Report file");

  SweepOptions noiseopt;
  CLI::App* noise_cmd = app.add_subcommand("sweep-noise", "Error vs noise strength");
  noise_cmd->add_option("--grid", noiseopt.grid, "Comma-separated rho values")->required();
  noise_cmd->add_option("--trials", noiseopt.trials, "Trials per grid value");
  noise_cmd->add_option("--k", noiseopt.k, "Dimension K");
  noise_cmd->add_option("--n", noiseopt.n, "Samples per trial");
  noise_cmd->add_option("--kind", noiseopt.kind, "Simplex kind: regular|gaussian")
      ->check(CLI::IsMember({"regular", "gaussian"}));
  noise_cmd->add_option("--side", noiseopt.side, "Side length for the regular kind");
  noise_cmd->add_option("--scale", noiseopt.scale, "Vertex scale for the gaussian kind");
  noise_cmd->add_option("--tv-samples", noiseopt.tv_samples, "Monte-Carlo TV samples");
  noise_cmd->add_option("--epsilon", noiseopt.epsilon, "Target TV accuracy");
  noise_cmd->add_option("--zeta", noiseopt.zeta, "Failure probability budget");
  noise_cmd->add_option("--seed", noiseopt.seed, "Random seed");
  noise_cmd->add_option("--out", noiseopt.out, "Results CSV");
  add_fit_flags(noise_cmd, noiseopt.fit);

  SweepOptions dimopt;
  CLI::App* dim_cmd = app.add_subcommand("sweep-dim", "Error vs dimension, n ~ c K^2 ln K");
  dim_cmd->add_option("--grid", dimopt.grid, "Comma-separated K values")->required();
  dim_cmd->add_option("--c", dimopt.c, "Scaling constant in n = ceil(c K^2 ln K)");
  dim_cmd->add_option("--trials", dimopt.trials, "Trials per grid value");
  dim_cmd->add_option("--kind", dimopt.kind, "Simplex kind: regular|gaussian")
      ->check(CLI::IsMember({"regular", "gaussian"}));
  dim_cmd->add_option("--side", dimopt.side, "Side length for the regular kind");
  dim_cmd->add_option("--scale", dimopt.scale, "Vertex scale for the gaussian kind");
  dim_cmd->add_option("--tv-samples", dimopt.tv_samples, "Monte-Carlo TV samples");
  dim_cmd->add_option("--epsilon", dimopt.epsilon, "Target TV accuracy");
  dim_cmd->add_option("--zeta", dimopt.zeta, "Failure probability budget");
  dim_cmd->add_option("--seed", dimopt.seed, "Random seed");
  dim_cmd->add_option("--out", dimopt.out, "Results CSV");
  add_fit_flags(dim_cmd, dimopt.fit);

  PcaOptions pcaopt;
  CLI::App* pca_cmd = app.add_subcommand("pca", "Center and project data");
  pca_cmd->add_option("data", pcaopt.data_file, "Input data CSV")->required();
  pca_cmd->add_option("--dim", pcaopt.dim, "Target dimension")->required();
  pca_cmd->add_option("--out", pcaopt.out, "Output prefix");

  WeightsOptions wopt;
  CLI::App* weights_cmd = app.add_subcommand("weights", "Barycentric weights per sample");
  weights_cmd->add_option("--simplex", wopt.simplex_file, "Simplex file")->required();
  weights_cmd->add_option("--data", wopt.data_file, "Data CSV")->required();
  weights_cmd->add_option("--tol", wopt.tol, "Negativity flag tolerance");
  weights_cmd->add_option("--out", wopt.out, "Weights CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (fit_cmd->parsed()) return cmd_fit(fitopt);
    if (eval_cmd->parsed()) return cmd_eval(evalopt);
    if (noise_cmd->parsed()) return cmd_sweep_noise(noiseopt);
    if (dim_cmd->parsed()) return cmd_sweep_dim(dimopt);
    if (pca_cmd->parsed()) return cmd_pca(pcaopt);
    if (weights_cmd->parsed()) return cmd_weights(wopt);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
