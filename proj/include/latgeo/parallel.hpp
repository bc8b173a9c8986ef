#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace latgeo {

/// Latent samples per Monte Carlo block. Block b always draws from stream b of
/// the run seed, so results depend on (seed, n) only, never on thread count.
inline constexpr std::size_t kBlockSize = 4096;

/// Number of worker threads: LATGEO_THREADS if set, else hardware concurrency.
std::size_t worker_count();

/// Runs task(b) for b in [0, n_tasks) on the worker pool. Tasks must only
/// write to disjoint state. The first exception thrown is rethrown.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task);

struct GaussianBlock {
  std::size_t index;  // block number
  std::size_t begin;  // first global sample index
  std::size_t count;  // samples in this block
  std::span<const double> latents;  // count x dim, row-major
};

/// Streams n standard Gaussian vectors in R^dim, block by block, in parallel.
void for_each_gaussian_block(std::size_t n, std::size_t dim, std::uint64_t seed,
                             const std::function<void(const GaussianBlock&)>& fn);

inline std::size_t block_count(std::size_t n) {
  return (n + kBlockSize - 1) / kBlockSize;
}

}  // namespace latgeo
