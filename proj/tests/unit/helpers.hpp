#pragma once

#include <cmath>
#include <vector>

#include "simplex/linalg.hpp"
#include "simplex/rng.hpp"

namespace testutil {

inline simplex::Matrix random_matrix(std::size_t rows, std::size_t cols,
                                     simplex::Rng& rng) {
  simplex::Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.normal();
  return m;
}

inline double max_abs_diff(const simplex::Matrix& a, const simplex::Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

inline double max_abs(const simplex::Matrix& a) {
  double worst = 0.0;
  for (double x : a.data()) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace testutil
