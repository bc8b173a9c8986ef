#include "latgeo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "latgeo/random.hpp"

namespace latgeo {

std::size_t worker_count() {
  if (const char* env = std::getenv("LATGEO_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n_tasks,
                  const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min(worker_count(), n_tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) task(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      try {
        task(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_tasks);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

void for_each_gaussian_block(std::size_t n, std::size_t dim, std::uint64_t seed,
                             const std::function<void(const GaussianBlock&)>& fn) {
  parallel_for(block_count(n), [&](std::size_t b) {
    const std::size_t begin = b * kBlockSize;
    const std::size_t count = std::min(kBlockSize, n - begin);
    std::vector<double> latents(count * dim);
    RandomStream stream(seed, b);
    stream.fill_normal(latents);
    fn(GaussianBlock{b, begin, count, latents});
  });
}

}  // namespace latgeo
