#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "latgeo/frame.hpp"
#include "latgeo/linalg.hpp"

namespace latgeo {

/// Monte Carlo probability estimate with a Wilson 95% score interval.
struct MeasureEstimate {
  double value = 0.0;       // hit fraction
  double half_width = 0.0;  // (upper - lower) / 2
  double lower = 0.0;       // Wilson bounds, clipped to [0, 1]
  double upper = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static MeasureEstimate from_counts(std::uint64_t hits, std::uint64_t samples,
                                     std::uint64_t seed);

  /// Binomial standard error sqrt(p (1 - p) / n) at the estimate.
  double standard_error() const;
};

/// Standard error of a hit fraction with known success probability p.
double binomial_standard_error(double p, std::uint64_t samples);

using LatentPredicate = std::function<bool(VecView)>;

/// Fraction of n_samples seeded standard Gaussian vectors in R^dim that
/// satisfy the predicate. n_samples >= 100.
MeasureEstimate gaussian_measure(const LatentPredicate& indicator, std::size_t dim,
                                 std::size_t n_samples, std::uint64_t seed);

/// Gaussian measure of the epsilon-boundary of the frame's partition.
MeasureEstimate boundary_measure(const SimplexFrame& frame, double epsilon,
                                 std::size_t n_samples, std::uint64_t seed,
                                 BoundaryMethod method = BoundaryMethod::margin,
                                 const DykstraOptions& options = {});

/// One estimate per cell from a single shared sample; hit counts sum to
/// n_samples exactly.
std::vector<MeasureEstimate> cell_measures(const SimplexFrame& frame,
                                           std::size_t n_samples,
                                           std::uint64_t seed);

}  // namespace latgeo
