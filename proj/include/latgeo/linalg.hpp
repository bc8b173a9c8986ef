#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace latgeo {

using Vec = std::vector<double>;
using VecView = std::span<const double>;

// Accumulation runs in index order; every distance in the library goes
// through these helpers so that independent code paths produce the same bits.
inline double dot(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double squared_norm(VecView a) { return dot(a, a); }

inline double norm(VecView a) { return std::sqrt(squared_norm(a)); }

inline double squared_distance(VecView a, VecView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

inline double distance(VecView a, VecView b) {
  return std::sqrt(squared_distance(a, b));
}

inline bool all_finite(VecView a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Dense row-major block of points, one point per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("Matrix: data size does not match shape");
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw std::invalid_argument("Matrix: ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.row_mut(i).begin());
    }
    return m;
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  VecView row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row_mut(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace latgeo
