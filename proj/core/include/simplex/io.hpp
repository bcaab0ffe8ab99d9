#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simplex/dataset.hpp"
#include "simplex/geometry.hpp"
#include "simplex/linalg.hpp"
#include "simplex/optimizer.hpp"

namespace simplex {

/// Data files are CSV, one sample per row, plain decimals with 17
/// significant digits. A single header row is auto-detected on read; blank
/// lines and lines starting with '#' are skipped.
Dataset read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& rows,
               const std::vector<std::string>& header = {});

/// Simplex files hold {"k": K, "vertices": [K+1 coordinate lists]} with
/// 17-significant-digit decimals, vertices in column order.
Simplex read_simplex_file(const std::string& path);
void write_simplex_file(const std::string& path, const Simplex& s);

/// Trace CSV columns, in order: iteration, risk, volume,
/// max_planar_distance, active_size and, when a reference was supplied,
/// vertex_error. Resolved parameters are appended as '#' comment lines.
void write_trace(const std::string& path, const FitTrace& trace);

struct EvalReport {
  std::size_t k = 0;
  double error = 0.0;
  double normalized_error = 0.0;
  double tv_estimate = 0.0;
  double tv_std_error = 0.0;
  std::size_t tv_samples = 0;
  std::optional<double> containment;  // present when a dataset was supplied
  double volume_truth = 0.0;
  double volume_estimate = 0.0;
  IsoperimetryReport iso_truth;
  IsoperimetryReport iso_estimate;
};
void write_eval_report(const std::string& path, const EvalReport& report);

/// PCA model: mean, projection basis (one list per component) and the full
/// variance spectrum; enough to back-project reduced coordinates.
void write_pca_model(const std::string& path, const Pca& model);
Pca read_pca_model(const std::string& path);

/// 17-significant-digit decimal rendering used by every writer.
std::string format_number(double v);

}  // namespace simplex
