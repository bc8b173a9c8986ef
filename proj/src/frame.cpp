#include "latgeo/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace latgeo {
namespace {

constexpr double kSideRelTol = 1e-12;
constexpr double kCentroidTol = 1e-10;
constexpr double kNormRelTol = 1e-9;

void require_shape(const Matrix& points) {
  if (points.rows() < 2)
    throw std::invalid_argument("frame: need at least 2 points (count >= 2)");
  if (points.cols() < 1)
    throw std::invalid_argument("frame: dim must be >= 1");
  if (!all_finite(points.data()))
    throw std::invalid_argument("frame: directions contain non-finite values");
}

struct PairStats {
  double min = std::numeric_limits<double>::infinity();
  double max = 0.0;
};

PairStats pairwise_stats(const Matrix& points) {
  PairStats s;
  for (std::size_t i = 0; i < points.rows(); ++i)
    for (std::size_t j = i + 1; j < points.rows(); ++j) {
      const double dij = distance(points.row(i), points.row(j));
      s.min = std::min(s.min, dij);
      s.max = std::max(s.max, dij);
    }
  return s;
}

bool is_regular(const Matrix& points, const PairStats& stats) {
  if (points.rows() > points.cols() + 1) return false;
  if (stats.max - stats.min > kSideRelTol * stats.max) return false;
  const double scale = std::max(1.0, stats.max);
  for (std::size_t k = 0; k < points.cols(); ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) c += points.row(i)[k];
    if (std::abs(c) > kCentroidTol * scale) return false;
  }
  return true;
}

void require_equal_norms(const Matrix& points) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double r = norm(points.row(i));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi == 0.0 || hi - lo > kNormRelTol * hi)
    throw std::invalid_argument(
        "frame: directions must have equal norms so that every bisector "
        "passes through the origin");
}

}  // namespace

SimplexFrame::SimplexFrame(Matrix directions, FrameKind kind, double side)
    : directions_(std::move(directions)), kind_(kind), side_(side) {
  const std::size_t m = count(), d = dim();
  normals_ = Matrix(m * m, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double s = distance(direction(i), direction(j));
      auto nij = normals_.row_mut(i * m + j);
      auto nji = normals_.row_mut(j * m + i);
      for (std::size_t k = 0; k < d; ++k) {
        nij[k] = (direction(i)[k] - direction(j)[k]) / s;
        nji[k] = -nij[k];
      }
    }
}

SimplexFrame SimplexFrame::from_points(Matrix points) {
  require_shape(points);
  const PairStats stats = pairwise_stats(points);
  if (!(stats.min > 0.0))
    throw std::invalid_argument("frame: duplicate directions");
  if (is_regular(points, stats))
    return SimplexFrame(std::move(points), FrameKind::regular_simplex, stats.max);
  require_equal_norms(points);
  return SimplexFrame(std::move(points), FrameKind::directions, stats.min);
}

std::size_t SimplexFrame::cell_index(VecView z) const {
  if (z.size() != dim()) throw std::invalid_argument("cell_index: dimension mismatch");
  if (!all_finite(z)) throw std::invalid_argument("cell_index: non-finite coordinates");
  std::size_t best = 0;
  double best_d2 = squared_distance(z, direction(0));
  for (std::size_t i = 1; i < count(); ++i) {
    const double d2 = squared_distance(z, direction(i));
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

double SimplexFrame::margin(VecView z, std::size_t i) const {
  if (i >= count()) throw std::out_of_range("margin: cell index out of range");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count(); ++j)
    if (j != i) m = std::min(m, dot(z, normal(i, j)));
  return m;
}

void SimplexFrame::margins(VecView z, std::span<double> out) const {
  const std::size_t m = count();
  std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double t = dot(z, normal(i, j));
      out[i] = std::min(out[i], t);
      out[j] = std::min(out[j], -t);
    }
}

SimplexFrame equidistant_points(std::size_t m, std::size_t d, double side) {
  if (m < 2) throw std::invalid_argument("equidistant_points: m must be >= 2");
  if (d < 1) throw std::invalid_argument("equidistant_points: d must be >= 1");
  if (m > d + 1)
    throw std::invalid_argument(
        "equidistant_points: m > d + 1, no regular simplex with m vertices fits "
        "in R^d");
  if (!(side > 0.0) || !std::isfinite(side))
    throw std::invalid_argument("equidistant_points: side must be positive");

  // Helmert basis of the hyperplane orthogonal to (1, ..., 1): the centred
  // standard basis vectors e_i in R^m have coordinates h_k[i] in it.
  const double scale = side / std::sqrt(2.0);
  Matrix points(m, d);
  for (std::size_t k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    const double inv = 1.0 / std::sqrt(kk * (kk + 1.0));
    for (std::size_t i = 0; i < k; ++i) points.row_mut(i)[k - 1] = scale * inv;
    points.row_mut(k)[k - 1] = -scale * kk * inv;
  }
  return SimplexFrame::from_points(std::move(points));
}

SimplexFrame directions_frame(Matrix points) {
  require_shape(points);
  require_equal_norms(points);
  return SimplexFrame::from_points(std::move(points));
}

CellProjection project_onto_cell(const SimplexFrame& frame, std::size_t i,
                                 VecView z, const DykstraOptions& options) {
  if (!(options.tol > 0.0))
    throw std::invalid_argument("project_onto_cell: tol must be positive");
  if (i >= frame.count())
    throw std::out_of_range("project_onto_cell: cell index out of range");
  const std::size_t d = frame.dim();
  const std::size_t m = frame.count();

  Vec x(z.begin(), z.end());
  Vec prev(d);
  Vec y(d);
  // One Dykstra correction vector per halfspace.
  std::vector<Vec> corrections(m, Vec(d, 0.0));

  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    prev = x;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const VecView n = frame.normal(i, j);
      Vec& p = corrections[j];
      for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + p[k];
      const double violation = std::min(0.0, dot(y, n));
      for (std::size_t k = 0; k < d; ++k) {
        x[k] = y[k] - violation * n[k];
        p[k] = y[k] - x[k];
      }
    }
    if (distance(x, prev) < options.tol) {
      CellProjection out;
      out.distance = distance(z, x);
      out.point = std::move(x);
      out.iterations = iter;
      return out;
    }
  }
  throw ConvergenceError("project_onto_cell: Dykstra did not converge within " +
                         std::to_string(options.max_iter) + " iterations");
}

BoundaryMethod parse_boundary_method(const std::string& name) {
  if (name == "margin") return BoundaryMethod::margin;
  if (name == "exact") return BoundaryMethod::exact;
  throw std::invalid_argument("method: expected 'margin' or 'exact', got '" +
                              name + "'");
}

std::string to_string(BoundaryMethod method) {
  return method == BoundaryMethod::margin ? "margin" : "exact";
}

bool in_epsilon_boundary(const SimplexFrame& frame, VecView z, double epsilon,
                         BoundaryMethod method, const DykstraOptions& options) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("in_epsilon_boundary: epsilon must be positive");
  const std::size_t i = frame.cell_index(z);
  if (method == BoundaryMethod::margin) return frame.margin(z, i) <= epsilon;

  for (std::size_t j = 0; j < frame.count(); ++j) {
    if (j == i) continue;
    // Cell j lies beyond the bisector, so <z, n_ij> lower-bounds d(z, A_j).
    if (dot(z, frame.normal(i, j)) > epsilon) continue;
    if (project_onto_cell(frame, j, z, options).distance <= epsilon) return true;
  }
  return false;
}

}  // namespace latgeo
