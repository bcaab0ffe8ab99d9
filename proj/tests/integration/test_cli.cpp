// End-to-end tests that drive the installed CLI binary and check files,
// exit codes, and agreement with direct library calls.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "simplex/io.hpp"
#include "simplex/metrics.hpp"
#include "simplex/optimizer.hpp"
#include "simplex/rng.hpp"
#include "simplex/sampling.hpp"

using namespace simplex;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SIMPLEX_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) result.output += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("simplex_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("gen writes a simplex and contained samples") {
  Workspace ws;
  const CliResult r = run_cli("gen --k 2 --n 100 --kind regular --side 1 --seed 7 --out " +
                              ws.path("g"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sigma=0") != std::string::npos);

  const Simplex truth = read_simplex_file(ws.path("g.simplex.json"));
  const Dataset data = read_csv(ws.path("g.data.csv"));
  REQUIRE(data.size() == 100);
  const auto planes = facet_hyperplanes(truth);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(planar_distance(planes, data.point(i)) == 0.0);
  }
}

TEST_CASE("gen with rho 0 matches gen without rho byte for byte") {
  Workspace ws;
  CHECK(run_cli("gen --k 2 --n 50 --seed 3 --out " + ws.path("a")).exit_code == 0);
  CHECK(run_cli("gen --k 2 --n 50 --rho 0 --seed 3 --out " + ws.path("b")).exit_code == 0);
  CHECK(slurp(ws.path("a.data.csv")) == slurp(ws.path("b.data.csv")));
  CHECK(slurp(ws.path("a.simplex.json")) == slurp(ws.path("b.simplex.json")));
}

TEST_CASE("gen reports the sigma implied by rho") {
  Workspace ws;
  const CliResult r = run_cli("gen --k 2 --n 10 --kind regular --side 1 --rho 0.5 --seed 1 --out " +
                              ws.path("n"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sigma=0.5") != std::string::npos);
}

TEST_CASE("fit is deterministic and honors --iters 0") {
  Workspace ws;
  REQUIRE(run_cli("gen --k 2 --n 60 --seed 11 --out " + ws.path("g")).exit_code == 0);

  const std::string fit_args = ws.path("g.data.csv") + " --k 2 --seed 5 --iters 40 --out ";
  CHECK(run_cli("fit " + fit_args + ws.path("f1")).exit_code == 0);
  CHECK(run_cli("fit " + fit_args + ws.path("f2")).exit_code == 0);
  CHECK(slurp(ws.path("f1.simplex.json")) == slurp(ws.path("f2.simplex.json")));
  CHECK(slurp(ws.path("f1.trace.csv")) == slurp(ws.path("f2.trace.csv")));

  CHECK(run_cli("fit " + ws.path("g.data.csv") + " --k 2 --seed 5 --iters 0 --out " +
                ws.path("f0")).exit_code == 0);
  const Simplex initial = read_simplex_file(ws.path("f0.simplex.json"));
  const Dataset data = read_csv(ws.path("g.data.csv"));
  FitConfig cfg;
  cfg.seed = 5;
  const Simplex expected = initialize(data, 2, cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(initial.vertices()(i, j) ==
            doctest::Approx(expected.vertices()(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fit trace carries a decreasing reference error") {
  Workspace ws;
  REQUIRE(run_cli("gen --k 2 --n 100 --kind regular --side 1 --seed 21 --out " +
                  ws.path("g")).exit_code == 0);
  const CliResult r =
      run_cli("fit " + ws.path("g.data.csv") + " --k 2 --seed 9 --iters 400 " +
              "--alpha 0.03 --gamma 0.2 --ref " + ws.path("g.simplex.json") +
              " --out " + ws.path("f"));
  CHECK(r.exit_code == 0);

  std::ifstream trace(ws.path("f.trace.csv"));
  std::string header;
  std::getline(trace, header);
  CHECK(header ==
        "iteration,risk,volume,max_planar_distance,active_size,vertex_error");
  double first_err = -1.0, last_err = -1.0;
  std::string line;
  while (std::getline(trace, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find_last_of(',');
    const double err = std::strtod(line.c_str() + pos + 1, nullptr);
    if (first_err < 0) first_err = err;
    last_err = err;
  }
  CHECK(first_err > 0.0);
  CHECK(last_err < first_err);
}

TEST_CASE("eval of the exact truth reports zero error") {
  Workspace ws;
  REQUIRE(run_cli("gen --k 2 --n 50 --seed 2 --out " + ws.path("g")).exit_code == 0);
  const CliResult r = run_cli("eval --truth " + ws.path("g.simplex.json") +
                              " --estimate " + ws.path("g.simplex.json") +
                              " --data " + ws.path("g.data.csv") +
                              " --tv-samples 20000 --seed 4 --out " + ws.path("r.json"));
  CHECK(r.exit_code == 0);
  const nlohmann::json report = load_json(ws.path("r.json"));
  CHECK(report["error"].get<double>() == doctest::Approx(0.0));
  CHECK(report["tv_estimate"].get<double>() <= 0.01);
  CHECK(report["containment_fraction"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("eval of a translated simplex matches the closed form") {
  Workspace ws;
  const Simplex tri = Simplex::from_vertices({{0, 0}, {1, 0}, {0, 1}});
  Matrix moved = tri.vertices();
  for (std::size_t j = 0; j < 3; ++j) moved(0, j) += 1.0;
  write_simplex_file(ws.path("t.json"), tri);
  write_simplex_file(ws.path("e.json"), Simplex(moved));
  const CliResult r = run_cli("eval --truth " + ws.path("t.json") + " --estimate " +
                              ws.path("e.json") + " --tv-samples 1000 --out " +
                              ws.path("r.json"));
  CHECK(r.exit_code == 0);
  const nlohmann::json report = load_json(ws.path("r.json"));
  CHECK(report["error"].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("eval of the nested quarter-volume pair sees tv 0.75") {
  Workspace ws;
  const Simplex tri = Simplex::from_vertices({{0, 0}, {1, 0}, {0, 1}});
  Matrix half = tri.vertices();
  for (double& x : half.data()) x *= 0.5;
  write_simplex_file(ws.path("t.json"), tri);
  write_simplex_file(ws.path("e.json"), Simplex(half));
  const CliResult r = run_cli("eval --truth " + ws.path("t.json") + " --estimate " +
                              ws.path("e.json") + " --tv-samples 100000 --seed 1 --out " +
                              ws.path("r.json"));
  CHECK(r.exit_code == 0);
  const nlohmann::json report = load_json(ws.path("r.json"));
  CHECK(report["tv_estimate"].get<double>() == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("weights recover identity and uniform patterns") {
  Workspace ws;
  const Simplex tri = Simplex::from_vertices({{0, 0}, {2, 0}, {0, 2}});
  write_simplex_file(ws.path("s.json"), tri);
  Matrix pts(4, 2);
  pts(0, 0) = 0.0;
  pts(0, 1) = 0.0;
  pts(1, 0) = 2.0;
  pts(1, 1) = 0.0;
  pts(2, 0) = 0.0;
  pts(2, 1) = 2.0;
  pts(3, 0) = 2.0 / 3.0;
  pts(3, 1) = 2.0 / 3.0;  // the centroid
  write_csv(ws.path("d.csv"), pts);

  const CliResult r = run_cli("weights --simplex " + ws.path("s.json") + " --data " +
                              ws.path("d.csv") + " --out " + ws.path("w.csv"));
  CHECK(r.exit_code == 0);

  const Dataset w = read_csv(ws.path("w.csv"));
  REQUIRE(w.dim() == 4);  // w0, w1, w2, negative_flag
  REQUIRE(w.size() == 4);
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(w.points(v, j) == doctest::Approx(v == j ? 1.0 : 0.0).epsilon(1e-9));
    }
    CHECK(w.points(v, 3) == 0.0);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(w.points(3, j) == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("weights flag rows outside the simplex") {
  Workspace ws;
  const Simplex tri = Simplex::from_vertices({{0, 0}, {1, 0}, {0, 1}});
  write_simplex_file(ws.path("s.json"), tri);
  Matrix pts(1, 2, 5.0);
  write_csv(ws.path("d.csv"), pts);
  CHECK(run_cli("weights --simplex " + ws.path("s.json") + " --data " + ws.path("d.csv") +
                " --out " + ws.path("w.csv")).exit_code == 0);
  const Dataset w = read_csv(ws.path("w.csv"));
  CHECK(w.points(0, 3) == 1.0);
}

TEST_CASE("pca projects and back-projects") {
  Workspace ws;
  // Points on a 2-D plane embedded in R^5.
  Rng rng(31);
  Matrix pts(40, 5);
  for (std::size_t i = 0; i < 40; ++i) {
    const double u = rng.normal(), v = rng.normal();
    const double base[5] = {1.0, -2.0, 0.5, 0.0, 3.0};
    const double du[5] = {0.5, 0.5, 0.0, 1.0, -0.5};
    const double dv[5] = {-1.0, 0.25, 1.0, 0.0, 0.5};
    for (std::size_t j = 0; j < 5; ++j) pts(i, j) = base[j] + u * du[j] + v * dv[j];
  }
  write_csv(ws.path("d.csv"), pts);

  const CliResult r = run_cli("pca " + ws.path("d.csv") + " --dim 2 --out " + ws.path("p"));
  CHECK(r.exit_code == 0);

  const Dataset projected = read_csv(ws.path("p.data.csv"));
  const Pca model = read_pca_model(ws.path("p.basis.json"));
  REQUIRE(projected.dim() == 2);
  double residual = 0.0;
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double recon = model.mean[j];
      for (std::size_t c = 0; c < 2; ++c) {
        recon += projected.points(i, c) * model.basis(j, c);
      }
      const double diff = recon - pts(i, j);
      residual += diff * diff;
    }
  }
  CHECK(residual / 40.0 < 1e-10);
  // Variance beyond the plane is zero.
  for (std::size_t extra = 2; extra < model.variances.size(); ++extra) {
    CHECK(model.variances[extra] < 1e-10);
  }
}

TEST_CASE("pca rejects an out-of-range dimension") {
  Workspace ws;
  Matrix pts(4, 3, 1.0);
  pts(1, 0) = 2.0;
  pts(2, 1) = 3.0;
  pts(3, 2) = 4.0;
  write_csv(ws.path("d.csv"), pts);
  CHECK(run_cli("pca " + ws.path("d.csv") + " --dim 4 --out " + ws.path("p")).exit_code == 2);
}

TEST_CASE("sweep-noise produces rows, summaries, and respects the grid") {
  Workspace ws;
  const CliResult r = run_cli(
      "sweep-noise --grid 0,0.2 --trials 2 --k 2 --n 40 --iters 60 --alpha 0.05 "
      "--gamma 0.3 --tv-samples 500 --seed 1 --out " + ws.path("s.csv"));
  CHECK(r.exit_code == 0);
  std::ifstream in(ws.path("s.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "rho,n,trial,error,normalized_error,tv,runtime_seconds,failed");
  int rows = 0, summaries = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      ++summaries;
    } else {
      ++rows;
    }
  }
  CHECK(rows == 4);
  CHECK(summaries == 2);
}

TEST_CASE("usage and i/o failures map to the documented exit codes") {
  Workspace ws;
  CHECK(run_cli("gen --k 2").exit_code == 2);           // missing required --n
  CHECK(run_cli("nonsense").exit_code == 2);            // unknown subcommand
  CHECK(run_cli("sweep-noise --grid , --trials 1 --out " + ws.path("x.csv")).exit_code == 2);
  CHECK(run_cli("sweep-dim --grid 1,4 --out " + ws.path("x.csv")).exit_code == 2);
  CHECK(run_cli("fit " + ws.path("missing.csv") + " --k 2 --out " + ws.path("f")).exit_code == 3);
  CHECK(run_cli("eval --truth " + ws.path("nope.json") + " --estimate " +
                ws.path("nope.json") + " --out " + ws.path("r.json")).exit_code == 3);

  // Degenerate data: all points identical.
  Matrix same(5, 2, 1.0);
  write_csv(ws.path("same.csv"), same);
  CHECK(run_cli("fit " + ws.path("same.csv") + " --k 2 --out " + ws.path("f")).exit_code == 4);
}

TEST_CASE("cli pipeline equals direct library calls") {
  Workspace ws;
  REQUIRE(run_cli("gen --k 2 --n 80 --kind regular --side 1 --seed 13 --out " +
                  ws.path("g")).exit_code == 0);
  REQUIRE(run_cli("fit " + ws.path("g.data.csv") +
                  " --k 2 --seed 3 --iters 200 --alpha 0.03 --gamma 0.2 --out " +
                  ws.path("f")).exit_code == 0);
  REQUIRE(run_cli("eval --truth " + ws.path("g.simplex.json") + " --estimate " +
                  ws.path("f.simplex.json") + " --tv-samples 1000 --seed 9 --out " +
                  ws.path("r.json")).exit_code == 0);

  // The same computation straight through the library.
  const Simplex truth = random_simplex(2, SimplexKind::regular, 1.0, Rng::derive(13, 0));
  const Dataset data = sample_uniform(truth, 80, Rng::derive(13, 1));
  FitConfig cfg;
  cfg.iterations = 200;
  cfg.alpha = 0.03;
  cfg.gamma = 0.2;
  cfg.seed = 3;
  const FitResult direct = fit(data, 2, cfg);
  const ErrorReport rep = vertex_error(truth, direct.estimate);

  const nlohmann::json report = load_json(ws.path("r.json"));
  CHECK(report["error"].get<double>() == doctest::Approx(rep.error).epsilon(1e-12));
  const Simplex est = read_simplex_file(ws.path("f.simplex.json"));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(est.vertices()(i, j) ==
            doctest::Approx(direct.estimate.vertices()(i, j)).epsilon(1e-12));
    }
  }
}
