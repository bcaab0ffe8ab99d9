#include "simplex/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "simplex/rng.hpp"

namespace simplex {

Simplex::Simplex(Matrix vertices) : vertices_(std::move(vertices)) {
  if (vertices_.rows() < 1 || vertices_.cols() != vertices_.rows() + 1) {
    throw DimensionError("Simplex: vertex matrix must be K x (K+1)");
  }
}

Simplex Simplex::from_vertices(const std::vector<std::vector<double>>& vertices) {
  if (vertices.empty()) throw DimensionError("Simplex: no vertices");
  const std::size_t k = vertices.size() - 1;
  if (k < 1) throw DimensionError("Simplex: need at least 2 vertices");
  Matrix m(k, k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    if (vertices[j].size() != k) {
      throw DimensionError("Simplex: vertex length must equal K");
    }
    m.set_column(j, vertices[j]);
  }
  return Simplex(std::move(m));
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

Matrix edge_matrix(const Simplex& s) {
  const std::size_t k = s.dim();
  Matrix d(k, k);
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      d(i, j - 1) = s.vertices()(i, j) - s.vertices()(i, 0);
    }
  }
  return d;
}

double volume(const Simplex& s) {
  return std::abs(determinant(edge_matrix(s))) / factorial(s.dim());
}

double facet_volume(const Simplex& s, std::size_t k) {
  const std::size_t dim = s.dim();
  if (k >= s.vertex_count()) throw DimensionError("facet_volume: bad facet index");
  if (dim == 1) return 1.0;  // a point has counting measure 1

  std::vector<std::size_t> ids;
  for (std::size_t j = 0; j < s.vertex_count(); ++j) {
    if (j != k) ids.push_back(j);
  }
  Matrix a(dim, dim - 1);
  for (std::size_t c = 1; c < ids.size(); ++c) {
    for (std::size_t i = 0; i < dim; ++i) {
      a(i, c - 1) = s.vertices()(i, ids[c]) - s.vertices()(i, ids[0]);
    }
  }
  const Matrix gram = multiply(transpose(a), a);
  const double g = determinant(gram);
  return std::sqrt(std::max(g, 0.0)) / factorial(dim - 1);
}

double diameter_simplex(const Simplex& s) {
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < s.vertex_count(); ++a) {
    const auto va = s.vertex(a);
    for (std::size_t b = a + 1; b < s.vertex_count(); ++b) {
      best = std::max(best, distance2(va, s.vertex(b)));
    }
  }
  return std::sqrt(best);
}

double diameter_dataset(const Dataset& d) {
  if (d.size() < 2) throw DomainError("diameter_dataset: need at least 2 points");
  // The diameter is attained at hull vertices; up to three dimensions the
  // exact hull cuts the all-pairs scan down to the extreme points.
  std::vector<std::size_t> candidates;
  if (d.dim() <= 3 && d.size() > 64) {
    try {
      candidates = extreme_points(d, HullMode::exact, 0, 0);
    } catch (const Error&) {
      candidates.clear();
    }
  }
  if (candidates.size() < 2) {
    candidates.resize(d.size());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  }
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < candidates.size(); ++a) {
    const auto pa = d.point(candidates[a]);
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      best = std::max(best, distance2(pa, d.point(candidates[b])));
    }
  }
  return std::sqrt(best);
}

bool is_degenerate(const Simplex& s) {
  if (!s.vertices().all_finite()) return true;
  const double diam = diameter_simplex(s);
  if (diam == 0.0) return true;
  const double vol = volume(s);
  // diam^K / K! is the volume scale of a simplex with diameter diam; without
  // the K! the test would flag every legitimate simplex beyond K ~ 12.
  const double k = static_cast<double>(s.dim());
  return vol < kDegenerateVolumeFactor * std::pow(diam, k) / factorial(s.dim());
}

std::vector<FacetHyperplane> facet_hyperplanes(const Simplex& s) {
  if (is_degenerate(s)) throw DegeneracyError("facet_hyperplanes: degenerate simplex");
  const std::size_t k = s.dim();
  std::vector<FacetHyperplane> planes(k + 1);

  if (k == 1) {
    const double t0 = s.vertices()(0, 0);
    const double t1 = s.vertices()(0, 1);
    // Facet -j is the opposite vertex; the normal points away from theta_j.
    planes[0] = {{t1 > t0 ? 1.0 : -1.0}, 0.0, 0};
    planes[0].bias = -planes[0].normal[0] * t1;
    planes[1] = {{t0 > t1 ? 1.0 : -1.0}, 0.0, 1};
    planes[1].bias = -planes[1].normal[0] * t0;
    return planes;
  }

  for (std::size_t facet = 0; facet <= k; ++facet) {
    std::vector<double> centroid(k, 0.0);
    for (std::size_t j = 0; j <= k; ++j) {
      if (j == facet) continue;
      for (std::size_t i = 0; i < k; ++i) centroid[i] += s.vertices()(i, j);
    }
    for (double& c : centroid) c /= static_cast<double>(k);

    // Rows of (I - 11^T/K) Theta_{-facet}^T: facet vertices about their mean.
    Matrix m(k, k);
    std::size_t r = 0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j == facet) continue;
      for (std::size_t i = 0; i < k; ++i) m(r, i) = s.vertices()(i, j) - centroid[i];
      ++r;
    }
    std::vector<double> w = null_unit_vector(m, kRankTol);

    // Outward: w^T (theta_facet - centroid) <= 0.
    double toward = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      toward += w[i] * (s.vertices()(i, facet) - centroid[i]);
    }
    if (toward > 0.0) {
      for (double& wi : w) wi = -wi;
    }
    FacetHyperplane& plane = planes[facet];
    plane.normal = std::move(w);
    plane.bias = -dot(plane.normal, centroid);
    plane.facet_index = facet;
  }
  return planes;
}

double planar_distance(const std::vector<FacetHyperplane>& planes,
                       std::span<const double> x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const FacetHyperplane& p : planes) {
    best = std::max(best, dot(p.normal, x) + p.bias);
  }
  return std::max(0.0, best);
}

FacetArgmax argmax_facet(const std::vector<FacetHyperplane>& planes,
                         std::span<const double> x, double tie_tol) {
  FacetArgmax out;
  out.index = 0;
  out.value = dot(planes[0].normal, x) + planes[0].bias;
  for (std::size_t k = 1; k < planes.size(); ++k) {
    const double v = dot(planes[k].normal, x) + planes[k].bias;
    if (v > out.value + tie_tol) {
      out.index = k;
      out.value = v;
    }
  }
  for (std::size_t k = 0; k < planes.size(); ++k) {
    if (k == out.index) continue;
    const double v = dot(planes[k].normal, x) + planes[k].bias;
    if (v >= out.value - tie_tol) {
      out.tie = true;
      break;
    }
  }
  return out;
}

IsoperimetryReport isoperimetry_constants(const Simplex& s) {
  if (is_degenerate(s)) {
    throw DegeneracyError("isoperimetry_constants: degenerate simplex");
  }
  const double vol = volume(s);
  const double k = static_cast<double>(s.dim());

  double max_edge = 0.0;
  for (std::size_t a = 0; a + 1 < s.vertex_count(); ++a) {
    const auto va = s.vertex(a);
    for (std::size_t b = a + 1; b < s.vertex_count(); ++b) {
      max_edge = std::max(max_edge, std::sqrt(distance2(va, s.vertex(b))));
    }
  }
  double max_facet = 0.0;
  for (std::size_t f = 0; f < s.vertex_count(); ++f) {
    max_facet = std::max(max_facet, facet_volume(s, f));
  }

  IsoperimetryReport rep;
  rep.lambda_under = max_edge / (k * std::pow(vol, 1.0 / k));
  rep.lambda_bar = max_facet / std::pow(vol, (k - 1.0) / k);
  return rep;
}

// ---- convex hull machinery -------------------------------------------------

namespace {

double bbox_extent(const Dataset& d) {
  double extent = 0.0;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    double lo = d.points(0, j), hi = d.points(0, j);
    for (std::size_t i = 1; i < d.size(); ++i) {
      lo = std::min(lo, d.points(i, j));
      hi = std::max(hi, d.points(i, j));
    }
    extent = std::max(extent, hi - lo);
  }
  return extent;
}

/// Affine rank of the point cloud and an orthonormal basis of its span,
/// found by greedy Gram-Schmidt against the first point.
struct AffineFrame {
  std::vector<double> base;
  std::vector<std::vector<double>> basis;
};

AffineFrame affine_frame(const Dataset& d, double scale) {
  const std::size_t dim = d.dim();
  AffineFrame frame;
  frame.base.assign(d.point(0).begin(), d.point(0).end());
  const double tol = 1e-9 * scale;
  for (std::size_t i = 1; i < d.size() && frame.basis.size() < dim; ++i) {
    std::vector<double> v(dim);
    const auto p = d.point(i);
    for (std::size_t j = 0; j < dim; ++j) v[j] = p[j] - frame.base[j];
    for (const auto& b : frame.basis) {
      const double proj = dot(v, b);
      for (std::size_t j = 0; j < dim; ++j) v[j] -= proj * b[j];
    }
    const double nn = std::sqrt(norm2(v));
    if (nn > tol) {
      for (double& x : v) x /= nn;
      frame.basis.push_back(std::move(v));
    }
  }
  return frame;
}

Matrix project_to_frame(const Dataset& d, const AffineFrame& frame) {
  const std::size_t r = frame.basis.size();
  Matrix out(d.size(), r);
  std::vector<double> v(d.dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto p = d.point(i);
    for (std::size_t j = 0; j < d.dim(); ++j) v[j] = p[j] - frame.base[j];
    for (std::size_t c = 0; c < r; ++c) out(i, c) = dot(v, frame.basis[c]);
  }
  return out;
}

std::vector<std::size_t> hull_1d(const Matrix& pts) {
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < pts.rows(); ++i) {
    if (pts(i, 0) < pts(imin, 0)) imin = i;
    if (pts(i, 0) > pts(imax, 0)) imax = i;
  }
  std::vector<std::size_t> out{imin, imax};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Andrew's monotone chain; collinear points along hull edges are dropped,
/// so the result is precisely the hull vertex set.
std::vector<std::size_t> hull_2d(const Matrix& pts, double scale) {
  const std::size_t n = pts.rows();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (pts(a, 0) != pts(b, 0)) return pts(a, 0) < pts(b, 0);
    if (pts(a, 1) != pts(b, 1)) return pts(a, 1) < pts(b, 1);
    return a < b;
  });
  // Exact duplicates keep only their smallest index.
  std::vector<std::size_t> uniq;
  for (std::size_t i : idx) {
    if (!uniq.empty() && pts(uniq.back(), 0) == pts(i, 0) &&
        pts(uniq.back(), 1) == pts(i, 1)) {
      continue;
    }
    uniq.push_back(i);
  }
  if (uniq.size() == 1) return uniq;

  const double eps_area = 1e-12 * scale * scale;
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts(a, 0) - pts(o, 0)) * (pts(b, 1) - pts(o, 1)) -
           (pts(a, 1) - pts(o, 1)) * (pts(b, 0) - pts(o, 0));
  };

  std::vector<std::size_t> chain(2 * uniq.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < uniq.size(); ++i) {  // lower
    while (m >= 2 && cross(chain[m - 2], chain[m - 1], uniq[i]) <= eps_area) --m;
    chain[m++] = uniq[i];
  }
  const std::size_t lower = m + 1;
  for (std::size_t i = uniq.size() - 1; i-- > 0;) {  // upper
    while (m >= lower && cross(chain[m - 2], chain[m - 1], uniq[i]) <= eps_area) --m;
    chain[m++] = uniq[i];
  }
  chain.resize(m - 1);  // last point equals the first
  std::sort(chain.begin(), chain.end());
  chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
  return chain;
}

/// Quickhull in three dimensions. Horizon edges are recovered as the
/// undirected edges used exactly once across the visible face set.
std::vector<std::size_t> hull_3d(const Matrix& pts, double scale) {
  const std::size_t n = pts.rows();
  const double eps = 1e-9 * scale;
  auto at = [&](std::size_t i) {
    return std::array<double, 3>{pts(i, 0), pts(i, 1), pts(i, 2)};
  };
  auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  };
  auto cross3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[1] * b[2] - a[2] * b[1],
                                 a[2] * b[0] - a[0] * b[2],
                                 a[0] * b[1] - a[1] * b[0]};
  };
  auto dot3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };

  // Initial tetrahedron from axis extremes, a farthest pair, then the
  // farthest point from the line and from the plane.
  std::vector<std::size_t> cand;
  for (int axis = 0; axis < 3; ++axis) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (pts(i, axis) < pts(lo, axis)) lo = i;
      if (pts(i, axis) > pts(hi, axis)) hi = i;
    }
    cand.push_back(lo);
    cand.push_back(hi);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::size_t ia = 0, ib = 0;
  double best = -1.0;
  for (std::size_t a = 0; a < cand.size(); ++a) {
    for (std::size_t b = a + 1; b < cand.size(); ++b) {
      const double d2 = distance2(pts.row(cand[a]), pts.row(cand[b]));
      if (d2 > best) {
        best = d2;
        ia = cand[a];
        ib = cand[b];
      }
    }
  }
  const auto pa = at(ia), pb = at(ib);
  const auto ab = sub(pb, pa);
  std::size_t ic = n;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cross3(ab, sub(at(i), pa));
    const double d2 = dot3(c, c);
    if (d2 > best) {
      best = d2;
      ic = i;
    }
  }
  if (ic == n || std::sqrt(best) <= eps * std::sqrt(dot3(ab, ab))) {
    throw DegeneracyError("hull_3d: points are not full-dimensional");
  }
  const auto pc = at(ic);
  auto normal0 = cross3(ab, sub(pc, pa));
  std::size_t id = n;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(dot3(normal0, sub(at(i), pa)));
    if (d > best) {
      best = d;
      id = i;
    }
  }
  if (id == n || best <= eps * std::sqrt(dot3(normal0, normal0))) {
    throw DegeneracyError("hull_3d: points are not full-dimensional");
  }

  std::array<double, 3> interior{};
  for (int j = 0; j < 3; ++j) {
    interior[j] = (pts(ia, j) + pts(ib, j) + pts(ic, j) + pts(id, j)) / 4.0;
  }

  struct Face {
    std::array<std::size_t, 3> v;
    std::array<double, 3> normal;
    double offset = 0.0;  // plane: normal . x = offset, normal outward, |normal| = 1
    std::vector<std::size_t> outside;
    bool alive = true;
  };
  std::vector<Face> faces;

  auto make_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Face f;
    f.v = {a, b, c};
    auto nrm = cross3(sub(at(b), at(a)), sub(at(c), at(a)));
    const double len = std::sqrt(dot3(nrm, nrm));
    for (double& x : nrm) x /= len;
    double off = dot3(nrm, at(a));
    if (dot3(nrm, interior) > off) {  // flip outward
      for (double& x : nrm) x = -x;
      off = -off;
    }
    f.normal = nrm;
    f.offset = off;
    return f;
  };
  auto above = [&](const Face& f, std::size_t i) {
    return dot3(f.normal, at(i)) - f.offset > eps;
  };

  faces.push_back(make_face(ia, ib, ic));
  faces.push_back(make_face(ia, ib, id));
  faces.push_back(make_face(ia, ic, id));
  faces.push_back(make_face(ib, ic, id));
  for (std::size_t i = 0; i < n; ++i) {
    for (Face& f : faces) {
      if (above(f, i)) {
        f.outside.push_back(i);
        break;
      }
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    if (!faces[fi].outside.empty()) pending.push_back(fi);
  }

  while (!pending.empty()) {
    const std::size_t fi = pending.back();
    pending.pop_back();
    if (!faces[fi].alive || faces[fi].outside.empty()) continue;

    std::size_t far = faces[fi].outside[0];
    double far_d = dot3(faces[fi].normal, at(far)) - faces[fi].offset;
    for (std::size_t i : faces[fi].outside) {
      const double d = dot3(faces[fi].normal, at(i)) - faces[fi].offset;
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }

    std::vector<std::size_t> visible;
    for (std::size_t gi = 0; gi < faces.size(); ++gi) {
      if (faces[gi].alive && above(faces[gi], far)) visible.push_back(gi);
    }

    std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
    std::vector<std::size_t> orphans;
    for (std::size_t gi : visible) {
      const auto& fv = faces[gi].v;
      for (int e = 0; e < 3; ++e) {
        auto key = std::minmax(fv[e], fv[(e + 1) % 3]);
        edge_count[{key.first, key.second}]++;
      }
      orphans.insert(orphans.end(), faces[gi].outside.begin(), faces[gi].outside.end());
      faces[gi].alive = false;
      faces[gi].outside.clear();
    }

    const std::size_t first_new = faces.size();
    for (const auto& [edge, count] : edge_count) {
      if (count != 1) continue;
      if (edge.first == far || edge.second == far) continue;
      faces.push_back(make_face(edge.first, edge.second, far));
    }

    for (std::size_t i : orphans) {
      if (i == far) continue;
      for (std::size_t gi = first_new; gi < faces.size(); ++gi) {
        if (above(faces[gi], i)) {
          faces[gi].outside.push_back(i);
          break;
        }
      }
    }
    for (std::size_t gi = first_new; gi < faces.size(); ++gi) {
      if (!faces[gi].outside.empty()) pending.push_back(gi);
    }
  }

  std::set<std::size_t> verts;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    verts.insert(f.v.begin(), f.v.end());
  }
  return {verts.begin(), verts.end()};
}

std::vector<std::size_t> exact_hull(const Dataset& data, double scale) {
  const AffineFrame frame = affine_frame(data, scale);
  const std::size_t rank = frame.basis.size();
  if (rank == 0) throw DegeneracyError("extreme_points: all points coincide");
  if (rank > 3) {
    throw DomainError("extreme_points: exact hull unsupported above 3 dimensions");
  }
  Matrix coords;
  if (rank == data.dim()) {
    coords = data.points;
  } else {
    coords = project_to_frame(data, frame);
  }
  if (rank == 1) return hull_1d(coords);
  if (rank == 2) return hull_2d(coords, scale);
  return hull_3d(coords, scale);
}

std::vector<std::size_t> approximate_hull(const Dataset& data, std::size_t directions,
                                          std::uint64_t seed) {
  const std::size_t dim = data.dim();
  Rng rng(seed);
  std::set<std::size_t> found;
  std::vector<double> w(dim);
  for (std::size_t trial = 0; trial < directions; ++trial) {
    double nn = 0.0;
    do {
      for (double& x : w) x = rng.normal();
      nn = std::sqrt(norm2(w));
    } while (nn == 0.0);
    for (double& x : w) x /= nn;

    std::size_t argmax = 0;
    double best = dot(w, data.point(0));
    for (std::size_t i = 1; i < data.size(); ++i) {
      const double v = dot(w, data.point(i));
      if (v > best) {
        best = v;
        argmax = i;
      }
    }
    found.insert(argmax);
  }
  return {found.begin(), found.end()};
}

}  // namespace

std::vector<std::size_t> extreme_points(const Dataset& data, HullMode mode,
                                        std::size_t directions, std::uint64_t seed) {
  if (data.size() == 0) throw DomainError("extreme_points: empty dataset");
  const double scale = bbox_extent(data);
  if (scale == 0.0) throw DegeneracyError("extreme_points: all points coincide");
  if (mode == HullMode::exact) return exact_hull(data, scale);
  if (directions == 0) directions = 50 * data.dim();
  return approximate_hull(data, directions, seed);
}

std::vector<std::size_t> extreme_points_auto(const Dataset& data,
                                             std::size_t directions,
                                             std::uint64_t seed) {
  if (data.dim() <= 3) return extreme_points(data, HullMode::exact, directions, seed);
  return extreme_points(data, HullMode::approximate, directions, seed);
}

}  // namespace simplex
