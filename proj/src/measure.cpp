#include "latgeo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latgeo/normal.hpp"
#include "latgeo/parallel.hpp"

namespace latgeo {

MeasureEstimate MeasureEstimate::from_counts(std::uint64_t hits,
                                             std::uint64_t samples,
                                             std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("estimate: zero samples");
  if (hits > samples) throw std::invalid_argument("estimate: hits > samples");
  MeasureEstimate e;
  e.hits = hits;
  e.samples = samples;
  e.seed = seed;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double spread = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.value = p;
  e.lower = std::clamp(centre - spread, 0.0, 1.0);
  e.upper = std::clamp(centre + spread, 0.0, 1.0);
  if (hits == 0) e.lower = 0.0;
  if (hits == samples) e.upper = 1.0;
  e.half_width = 0.5 * (e.upper - e.lower);
  return e;
}

double MeasureEstimate::standard_error() const {
  return binomial_standard_error(value, samples);
}

double binomial_standard_error(double p, std::uint64_t samples) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(samples));
}

MeasureEstimate gaussian_measure(const LatentPredicate& indicator, std::size_t dim,
                                 std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100)
    throw std::invalid_argument("gaussian_measure: n_samples must be >= 100");
  if (dim < 1) throw std::invalid_argument("gaussian_measure: dim must be >= 1");
  std::vector<std::uint64_t> hits(block_count(n_samples), 0);
  for_each_gaussian_block(n_samples, dim, seed, [&](const GaussianBlock& block) {
    std::uint64_t h = 0;
    for (std::size_t s = 0; s < block.count; ++s)
      if (indicator(block.latents.subspan(s * dim, dim))) ++h;
    hits[block.index] = h;
  });
  return MeasureEstimate::from_counts(
      std::accumulate(hits.begin(), hits.end(), std::uint64_t{0}), n_samples, seed);
}

MeasureEstimate boundary_measure(const SimplexFrame& frame, double epsilon,
                                 std::size_t n_samples, std::uint64_t seed,
                                 BoundaryMethod method,
                                 const DykstraOptions& options) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("boundary_measure: epsilon must be positive");
  return gaussian_measure(
      [&](VecView z) { return in_epsilon_boundary(frame, z, epsilon, method, options); },
      frame.dim(), n_samples, seed);
}

std::vector<MeasureEstimate> cell_measures(const SimplexFrame& frame,
                                           std::size_t n_samples,
                                           std::uint64_t seed) {
  if (n_samples < 100)
    throw std::invalid_argument("cell_measures: n_samples must be >= 100");
  const std::size_t m = frame.count(), d = frame.dim();
  std::vector<std::uint64_t> counts(block_count(n_samples) * m, 0);
  for_each_gaussian_block(n_samples, d, seed, [&](const GaussianBlock& block) {
    std::uint64_t* local = counts.data() + block.index * m;
    for (std::size_t s = 0; s < block.count; ++s)
      ++local[frame.cell_index(block.latents.subspan(s * d, d))];
  });
  std::vector<MeasureEstimate> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t c = 0;
    for (std::size_t b = 0; b < block_count(n_samples); ++b) c += counts[b * m + i];
    out.push_back(MeasureEstimate::from_counts(c, n_samples, seed));
  }
  return out;
}

}  // namespace latgeo
