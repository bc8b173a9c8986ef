#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latgeo/linalg.hpp"

namespace latgeo {

enum class Provenance { real, fake };

std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& name);

/// A cloud of n >= 1 finite points in R^ambient_dim with optional integer
/// labels and the seed that produced it, if any.
class SampleSet {
 public:
  SampleSet(Matrix points, Provenance provenance,
            std::optional<std::vector<int>> labels = std::nullopt,
            std::optional<std::uint64_t> seed = std::nullopt);

  std::size_t size() const { return points_.rows(); }
  std::size_t ambient_dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  VecView point(std::size_t i) const { return points_.row(i); }
  Provenance provenance() const { return provenance_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  const std::optional<std::uint64_t>& seed() const { return seed_; }

 private:
  Matrix points_;
  Provenance provenance_;
  std::optional<std::vector<int>> labels_;
  std::optional<std::uint64_t> seed_;
};

}  // namespace latgeo
