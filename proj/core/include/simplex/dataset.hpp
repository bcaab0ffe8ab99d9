#pragma once

#include <span>
#include <string>
#include <vector>

#include "simplex/linalg.hpp"

namespace simplex {

/// Ordered collection of n points in R^dim, one point per row.
struct Dataset {
  Matrix points;                          // n x dim
  std::vector<std::string> column_names;  // optional, carried from CSV headers

  Dataset() = default;
  explicit Dataset(Matrix pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.rows(); }
  std::size_t dim() const { return points.cols(); }
  std::span<const double> point(std::size_t i) const { return points.row(i); }
};

}  // namespace simplex
