#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "latgeo/linalg.hpp"

namespace latgeo {

enum class NeighborSearch { tree, brute_force };

/// Static kd-tree over the rows of a matrix. Identical rows are stored once
/// with a multiplicity, so heavily duplicated data (atoms) stays cheap.
///
/// Every distance is computed with latgeo::distance on the original row, and
/// subtrees are pruned only with a slackened bounding-box test, so results
/// agree bit for bit with an exhaustive scan.
class KdTree {
 public:
  explicit KdTree(const Matrix& points, std::size_t leaf_size = 8);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }

  /// Distance from q to its k-th nearest point. When exclude is set, that
  /// original row is removed once from the candidate multiset.
  double kth_distance(VecView q, std::size_t k,
                      std::optional<std::size_t> exclude = std::nullopt) const;

  /// Number of points p with distance(q, p) <= r, multiplicity included.
  std::size_t count_within(VecView q, double r) const;

  bool any_within(VecView q, double r) const;

  /// Index of the nearest original row; lowest index on distance ties.
  std::size_t nearest(VecView q) const;

 private:
  struct Node {
    std::size_t begin, end;  // range in order_
    std::size_t left = 0, right = 0;
    bool leaf = true;
    Vec lo, hi;
  };

  std::size_t build(std::size_t begin, std::size_t end, std::size_t leaf_size);
  double box_lower_bound(const Node& node, VecView q) const;

  std::size_t n_ = 0, dim_ = 0;
  Matrix unique_;                        // one row per distinct point
  std::vector<std::size_t> count_;       // multiplicity of each distinct point
  std::vector<std::size_t> first_row_;   // lowest original row of each distinct point
  std::vector<std::size_t> unique_of_;   // original row -> distinct point
  std::vector<std::size_t> order_;       // distinct points, tree order
  std::vector<Node> nodes_;
};

/// Distance from each row to its k-th nearest other row (self excluded).
/// Requires 1 <= k < rows.
std::vector<double> knn_radii(const Matrix& points, std::size_t k,
                              NeighborSearch method = NeighborSearch::tree);

}  // namespace latgeo
