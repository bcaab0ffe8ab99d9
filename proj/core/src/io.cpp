#include "simplex/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace simplex {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);

  Dataset out;
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t line_no = 0;
  bool header_checked = false;
  std::string line;
  std::vector<std::vector<double>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_fields(t);

    if (!header_checked) {
      header_checked = true;
      bool numeric = true;
      double tmp;
      for (const std::string& f : fields) {
        if (!parse_double(f, tmp)) {
          numeric = false;
          break;
        }
      }
      if (!numeric) {
        for (const std::string& f : fields) out.column_names.push_back(trim(f));
        cols = fields.size();
        continue;
      }
    }

    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(cols) + " fields, got " +
                    std::to_string(fields.size()));
    }
    std::vector<double> row(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      if (!parse_double(fields[j], row[j])) {
        throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" +
                      fields[j] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": no data rows");

  out.points = Matrix(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) out.points(i, j) = rows[i][j];
  }
  return out;
}

void write_csv(const std::string& path, const Matrix& rows,
               const std::vector<std::string>& header) {
  std::ofstream out = open_out(path);
  if (!header.empty()) {
    if (header.size() != rows.cols()) {
      throw DimensionError("write_csv: header width mismatch");
    }
    for (std::size_t j = 0; j < header.size(); ++j) {
      out << (j ? "," : "") << header[j];
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      out << (j ? "," : "") << format_number(rows(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

Simplex read_simplex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!j.contains("k") || !j.contains("vertices")) {
    throw IoError(path + ": missing 'k' or 'vertices'");
  }
  const std::size_t k = j["k"].get<std::size_t>();
  const auto& verts = j["vertices"];
  if (!verts.is_array() || verts.size() != k + 1) {
    throw IoError(path + ": expected " + std::to_string(k + 1) + " vertices");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& v : verts) {
    if (!v.is_array() || v.size() != k) {
      throw IoError(path + ": each vertex needs " + std::to_string(k) + " coordinates");
    }
    rows.push_back(v.get<std::vector<double>>());
  }
  return Simplex::from_vertices(rows);
}

void write_simplex_file(const std::string& path, const Simplex& s) {
  std::ofstream out = open_out(path);
  out << "{\n  \"k\": " << s.dim() << ",\n  \"vertices\": [\n";
  for (std::size_t j = 0; j < s.vertex_count(); ++j) {
    out << "    [";
    for (std::size_t i = 0; i < s.dim(); ++i) {
      out << (i ? ", " : "") << format_number(s.vertices()(i, j));
    }
    out << (j + 1 < s.vertex_count() ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_trace(const std::string& path, const FitTrace& trace) {
  std::ofstream out = open_out(path);
  const bool with_error =
      !trace.records.empty() && trace.records.front().vertex_error.has_value();
  out << "iteration,risk,volume,max_planar_distance,active_size";
  if (with_error) out << ",vertex_error";
  out << '\n';
  for (const TraceRecord& r : trace.records) {
    out << r.iteration << ',' << format_number(r.risk) << ','
        << format_number(r.volume) << ',' << format_number(r.max_planar_distance)
        << ',' << r.active_size;
    if (with_error) out << ',' << format_number(r.vertex_error.value_or(0.0));
    out << '\n';
  }
  out << "# b=" << format_number(trace.b) << '\n';
  out << "# alpha=" << format_number(trace.alpha) << '\n';
  out << "# gamma=" << format_number(trace.gamma) << '\n';
  out << "# perturbations=" << trace.perturbations << '\n';
  out << "# stopped_early=" << (trace.stopped_early ? 1 : 0) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void write_eval_report(const std::string& path, const EvalReport& r) {
  std::ofstream out = open_out(path);
  out << "{\n";
  out << "  \"k\": " << r.k << ",\n";
  out << "  \"error\": " << format_number(r.error) << ",\n";
  out << "  \"normalized_error\": " << format_number(r.normalized_error) << ",\n";
  out << "  \"tv_estimate\": " << format_number(r.tv_estimate) << ",\n";
  out << "  \"tv_std_error\": " << format_number(r.tv_std_error) << ",\n";
  out << "  \"tv_samples\": " << r.tv_samples << ",\n";
  if (r.containment) {
    out << "  \"containment_fraction\": " << format_number(*r.containment) << ",\n";
  }
  out << "  \"volume_truth\": " << format_number(r.volume_truth) << ",\n";
  out << "  \"volume_estimate\": " << format_number(r.volume_estimate) << ",\n";
  out << "  \"isoperimetry_truth\": {\"lambda_under\": "
      << format_number(r.iso_truth.lambda_under)
      << ", \"lambda_bar\": " << format_number(r.iso_truth.lambda_bar) << "},\n";
  out << "  \"isoperimetry_estimate\": {\"lambda_under\": "
      << format_number(r.iso_estimate.lambda_under)
      << ", \"lambda_bar\": " << format_number(r.iso_estimate.lambda_bar) << "}\n";
  out << "}\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_pca_model(const std::string& path, const Pca& model) {
  std::ofstream out = open_out(path);
  out << "{\n  \"mean\": [";
  for (std::size_t i = 0; i < model.mean.size(); ++i) {
    out << (i ? ", " : "") << format_number(model.mean[i]);
  }
  out << "],\n  \"basis\": [\n";
  for (std::size_t c = 0; c < model.basis.cols(); ++c) {
    out << "    [";
    for (std::size_t i = 0; i < model.basis.rows(); ++i) {
      out << (i ? ", " : "") << format_number(model.basis(i, c));
    }
    out << (c + 1 < model.basis.cols() ? "],\n" : "]\n");
  }
  out << "  ],\n  \"variances\": [";
  for (std::size_t i = 0; i < model.variances.size(); ++i) {
    out << (i ? ", " : "") << format_number(model.variances[i]);
  }
  out << "]\n}\n";
  if (!out) throw IoError("write failed: " + path);
}

Pca read_pca_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  Pca model;
  model.mean = j.at("mean").get<std::vector<double>>();
  const auto& basis = j.at("basis");
  if (!basis.is_array() || basis.empty()) throw IoError(path + ": empty basis");
  const std::size_t dim = model.mean.size();
  model.basis = Matrix(dim, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto col = basis[c].get<std::vector<double>>();
    if (col.size() != dim) throw IoError(path + ": basis width mismatch");
    model.basis.set_column(c, col);
  }
  model.variances = j.at("variances").get<std::vector<double>>();
  return model;
}

}  // namespace simplex
