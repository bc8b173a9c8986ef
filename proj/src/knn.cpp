#include "latgeo/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "latgeo/parallel.hpp"

namespace latgeo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// k-th smallest of a multiset of (distance, multiplicity) pairs, kept sorted
// and trimmed so that dropping the largest entry would leave fewer than k.
class KthTracker {
 public:
  explicit KthTracker(std::size_t k) : k_(k) {}
  double bound() const { return total_ >= k_ ? items_.back().first : kInf; }
  void offer(double d, std::size_t count) {
    if (count == 0 || d > bound()) return;
    auto it = std::upper_bound(items_.begin(), items_.end(), d,
                               [](double x, const auto& item) { return x < item.first; });
    items_.insert(it, {d, count});
    total_ += count;
    while (total_ - items_.back().second >= k_) {
      total_ -= items_.back().second;
      items_.pop_back();
    }
  }

 private:
  std::size_t k_;
  std::size_t total_ = 0;
  std::vector<std::pair<double, std::size_t>> items_;
};
}  // namespace

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : n_(points.rows()), dim_(points.cols()) {
  if (n_ == 0) throw std::invalid_argument("kd-tree: no points");
  if (leaf_size == 0) leaf_size = 1;
  std::vector<std::size_t> rows(n_);
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    const VecView pa = points.row(a), pb = points.row(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  unique_of_.assign(n_, 0);
  std::vector<Vec> distinct;
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t row = rows[r];
    const VecView p = points.row(row);
    if (r > 0) {
      const VecView prev = points.row(rows[r - 1]);
      if (std::equal(p.begin(), p.end(), prev.begin())) {
        ++count_.back();
        first_row_.back() = std::min(first_row_.back(), row);
        unique_of_[row] = distinct.size() - 1;
        continue;
      }
    }
    distinct.emplace_back(p.begin(), p.end());
    count_.push_back(1);
    first_row_.push_back(row);
    unique_of_[row] = distinct.size() - 1;
  }
  unique_ = Matrix::from_rows(distinct);
  order_.resize(distinct.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * distinct.size() / leaf_size + 2);
  build(0, order_.size(), leaf_size);
}

std::size_t KdTree::build(std::size_t begin, std::size_t end, std::size_t leaf_size) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end, 0, 0, true, Vec(dim_, kInf), Vec(dim_, -kInf)});
  {
    Node& node = nodes_[id];
    for (std::size_t s = begin; s < end; ++s) {
      const VecView p = unique_.row(order_[s]);
      for (std::size_t k = 0; k < dim_; ++k) {
        node.lo[k] = std::min(node.lo[k], p[k]);
        node.hi[k] = std::max(node.hi[k], p[k]);
      }
    }
  }
  if (end - begin <= leaf_size) return id;
  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double w = nodes_[id].hi[k] - nodes_[id].lo[k];
    if (w > widest) {
      widest = w;
      axis = k;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     return unique_.row(a)[axis] < unique_.row(b)[axis];
                   });
  const std::size_t left = build(begin, mid, leaf_size);
  const std::size_t right = build(mid, end, leaf_size);
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].leaf = false;
  return id;
}

// Rounding is monotone, so summing squared per-axis gaps in the same order as
// squared_distance gives a value never above any computed point distance.
double KdTree::box_lower_bound(const Node& node, VecView q) const {
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double gap = 0.0;
    if (q[k] < node.lo[k]) gap = q[k] - node.lo[k];
    else if (q[k] > node.hi[k]) gap = q[k] - node.hi[k];
    s += gap * gap;
  }
  return std::sqrt(s);
}

double KdTree::kth_distance(VecView q, std::size_t k, std::optional<std::size_t> exclude) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree: query dimension mismatch");
  const std::size_t available = exclude ? n_ - 1 : n_;
  if (k < 1 || k > available)
    throw std::invalid_argument("kd-tree: k must be in [1, " + std::to_string(available) + "]");
  const std::size_t skip = exclude ? unique_of_.at(*exclude) : order_.size();
  KthTracker best(k);
  auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (box_lower_bound(node, q) > best.bound()) return;
    if (node.leaf) {
      for (std::size_t s = node.begin; s < node.end; ++s) {
        const std::size_t u = order_[s];
        best.offer(distance(q, unique_.row(u)), count_[u] - (u == skip ? 1 : 0));
      }
      return;
    }
    const double dl = box_lower_bound(nodes_[node.left], q);
    const double dr = box_lower_bound(nodes_[node.right], q);
    if (dl <= dr) {
      self(self, node.left);
      self(self, node.right);
    } else {
      self(self, node.right);
      self(self, node.left);
    }
  };
  visit(visit, 0);
  return best.bound();
}

std::size_t KdTree::count_within(VecView q, double r) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree: query dimension mismatch");
  std::size_t total = 0;
  auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (box_lower_bound(node, q) > r) return;
    if (node.leaf) {
      for (std::size_t s = node.begin; s < node.end; ++s)
        if (distance(q, unique_.row(order_[s])) <= r) total += count_[order_[s]];
      return;
    }
    self(self, node.left);
    self(self, node.right);
  };
  visit(visit, 0);
  return total;
}

bool KdTree::any_within(VecView q, double r) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree: query dimension mismatch");
  auto visit = [&](auto&& self, std::size_t id) -> bool {
    const Node& node = nodes_[id];
    if (box_lower_bound(node, q) > r) return false;
    if (node.leaf) {
      for (std::size_t s = node.begin; s < node.end; ++s)
        if (distance(q, unique_.row(order_[s])) <= r) return true;
      return false;
    }
    return self(self, node.left) || self(self, node.right);
  };
  return visit(visit, 0);
}

std::size_t KdTree::nearest(VecView q) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree: query dimension mismatch");
  double best_d = kInf;
  std::size_t best_row = n_;
  auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (box_lower_bound(node, q) > best_d) return;
    if (node.leaf) {
      for (std::size_t s = node.begin; s < node.end; ++s) {
        const std::size_t u = order_[s];
        const double d = distance(q, unique_.row(u));
        if (d < best_d || (d == best_d && first_row_[u] < best_row)) {
          best_d = d;
          best_row = first_row_[u];
        }
      }
      return;
    }
    const double dl = box_lower_bound(nodes_[node.left], q);
    const double dr = box_lower_bound(nodes_[node.right], q);
    if (dl <= dr) {
      self(self, node.left);
      self(self, node.right);
    } else {
      self(self, node.right);
      self(self, node.left);
    }
  };
  visit(visit, 0);
  return best_row;
}

std::vector<double> knn_radii(const Matrix& points, std::size_t k, NeighborSearch method) {
  const std::size_t n = points.rows();
  if (k < 1 || k >= n)
    throw std::invalid_argument("knn_radii: need 1 <= k < n (k = " + std::to_string(k) +
                                ", n = " + std::to_string(n) + ")");
  std::vector<double> radii(n);
  const std::size_t blocks = block_count(n);
  if (method == NeighborSearch::brute_force) {
    parallel_for(blocks, [&](std::size_t b) {
      std::vector<double> dist(n - 1);
      for (std::size_t i = b * kBlockSize; i < std::min(n, (b + 1) * kBlockSize); ++i) {
        std::size_t t = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) dist[t++] = distance(points.row(i), points.row(j));
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        radii[i] = dist[k - 1];
      }
    });
    return radii;
  }
  const KdTree tree(points);
  parallel_for(blocks, [&](std::size_t b) {
    for (std::size_t i = b * kBlockSize; i < std::min(n, (b + 1) * kBlockSize); ++i)
      radii[i] = tree.kth_distance(points.row(i), k, i);
  });
  return radii;
}

}  // namespace latgeo
