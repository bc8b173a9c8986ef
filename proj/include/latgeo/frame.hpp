#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "latgeo/linalg.hpp"

namespace latgeo {

enum class FrameKind {
  regular_simplex,  // m <= d + 1 equidistant points, centroid at the origin
  directions,       // m equal-norm directions, no equidistance requirement
};

/// Voronoi partition of R^d generated by m points u_0..u_{m-1}. Every frame
/// has equal-norm points, so each bisector hyperplane passes through the
/// origin and every cell is a convex cone. Cells are indexed from 0.
class SimplexFrame {
 public:
  /// Re-validates an arbitrary point set. Regular-simplex mode is detected
  /// when the points are equidistant and centred; otherwise the points must
  /// have equal norms. Throws std::invalid_argument on any violation.
  static SimplexFrame from_points(Matrix points);

  std::size_t dim() const { return directions_.cols(); }
  std::size_t count() const { return directions_.rows(); }
  FrameKind kind() const { return kind_; }
  /// Common pairwise distance (regular mode) or the minimum pairwise
  /// distance (directions mode).
  double side() const { return side_; }

  const Matrix& directions() const { return directions_; }
  VecView direction(std::size_t i) const { return directions_.row(i); }
  /// Unit normal n_ij = (u_i - u_j) / |u_i - u_j|, i != j. n_ji = -n_ij.
  VecView normal(std::size_t i, std::size_t j) const {
    return normals_.row(i * count() + j);
  }

  /// argmin_i |z - u_i|, lowest index on ties.
  std::size_t cell_index(VecView z) const;

  /// min_{j != i} <z, n_ij>: nonnegative iff z lies in the closed cell i, and
  /// equal to the distance to the cell boundary off ridges.
  double margin(VecView z, std::size_t i) const;

  /// Writes margin(z, i) for every cell into out (size count()).
  void margins(VecView z, std::span<double> out) const;

 private:
  SimplexFrame(Matrix directions, FrameKind kind, double side);

  Matrix directions_;
  Matrix normals_;
  FrameKind kind_;
  double side_;
};

/// Regular simplex with m vertices in R^d, centroid at the origin and all
/// pairwise distances equal to side. Requires 2 <= m <= d + 1, side > 0.
SimplexFrame equidistant_points(std::size_t m, std::size_t d, double side);

/// Generalised frame from m >= 2 distinct points with equal norms (relative
/// tolerance 1e-9).
SimplexFrame directions_frame(Matrix points);

struct DykstraOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10'000;
};

struct CellProjection {
  Vec point;
  double distance = 0.0;
  std::size_t iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euclidean projection of z onto the closed cell i by Dykstra's alternating
/// projections over the halfspaces {<x, n_ij> >= 0}. Throws ConvergenceError
/// when max_iter sweeps leave the iterate still moving by >= tol.
CellProjection project_onto_cell(const SimplexFrame& frame, std::size_t i,
                                 VecView z, const DykstraOptions& options = {});

enum class BoundaryMethod { margin, exact };

BoundaryMethod parse_boundary_method(const std::string& name);
std::string to_string(BoundaryMethod method);

/// Membership in the epsilon-boundary: z lies in its own cell and within
/// distance epsilon of some other closed cell. The margin method tests the
/// nearest bisector hyperplane (a superset of the exact set near ridges);
/// the exact method projects onto every other cell.
bool in_epsilon_boundary(const SimplexFrame& frame, VecView z, double epsilon,
                         BoundaryMethod method,
                         const DykstraOptions& options = {});

}  // namespace latgeo
