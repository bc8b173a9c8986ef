#include "latgeo/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latgeo/parallel.hpp"
#include "latgeo/random.hpp"

namespace latgeo {

ModeSet::ModeSet(Matrix modes) : modes_(std::move(modes)) {
  const std::size_t m = modes_.rows();
  if (m < 2) throw std::invalid_argument("mode set: need at least two modes");
  if (modes_.cols() < 1) throw std::invalid_argument("mode set: ambient_dim must be >= 1");
  for (std::size_t i = 0; i < m; ++i)
    if (!all_finite(modes_.row(i)))
      throw std::invalid_argument("mode set: non-finite coordinate in mode " +
                                  std::to_string(i));
  min_gap_ = INFINITY;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = distance(modes_.row(i), modes_.row(j));
      if (dist == 0.0)
        throw std::invalid_argument("mode set: modes " + std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      diameter_ = std::max(diameter_, dist);
      min_gap_ = std::min(min_gap_, dist);
    }
}

namespace {
void check_budget(double lipschitz) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz))
    throw std::invalid_argument("Lipschitz budget must be positive and finite");
}
}  // namespace

double epsilon_min(const ModeSet& modes, double lipschitz) {
  check_budget(lipschitz);
  return modes.min_gap() / lipschitz;
}

double epsilon_max(const ModeSet& modes, double lipschitz) {
  check_budget(lipschitz);
  return modes.diameter() * std::sqrt(static_cast<double>(modes.count())) / lipschitz;
}

GeneratorStar::GeneratorStar(SimplexFrame frame, ModeSet modes, double epsilon,
                             double lipschitz)
    : frame_(std::move(frame)), modes_(std::move(modes)), epsilon_(epsilon),
      lipschitz_(lipschitz) {
  if (frame_.count() != modes_.count())
    throw std::invalid_argument("generator: frame has " + std::to_string(frame_.count()) +
                                " cells but there are " + std::to_string(modes_.count()) +
                                " modes");
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
    throw std::invalid_argument("generator: epsilon must be positive and finite");
  if (!(lipschitz_ > modes_.diameter()) || !std::isfinite(lipschitz_))
    throw std::invalid_argument("generator: Lipschitz budget must exceed the mode diameter");
}

GeneratorStar GeneratorStar::at_epsilon_max(SimplexFrame frame, ModeSet modes,
                                            double lipschitz) {
  const double eps = epsilon_max(modes, lipschitz);
  return GeneratorStar(std::move(frame), std::move(modes), eps, lipschitz);
}

double GeneratorStar::extension_distance(std::size_t i, VecView z) const {
  return std::max(0.0, epsilon_ + frame_.margin(z, i));
}

std::vector<std::size_t> GeneratorStar::active_set(VecView z) const {
  Vec ext(frame_.count());
  frame_.margins(z, ext);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ext.size(); ++i)
    if (epsilon_ + ext[i] > 0.0) out.push_back(i);
  return out;
}

Vec GeneratorStar::weights(VecView z) const {
  Vec w(frame_.count());
  frame_.margins(z, w);
  double total = 0.0;
  for (double& x : w) {
    x = std::max(0.0, epsilon_ + x);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

Vec GeneratorStar::generate(VecView z) const {
  Vec out(ambient_dim());
  Vec scratch(frame_.count());
  generate_into(z, out, scratch);
  return out;
}

std::size_t GeneratorStar::generate_into(VecView z, std::span<double> out,
                                         std::span<double> scratch) const {
  const std::size_t m = frame_.count(), D = ambient_dim();
  if (out.size() != D || scratch.size() < m)
    throw std::invalid_argument("generate_into: buffer size mismatch");
  std::span<double> ext = scratch.first(m);
  frame_.margins(z, ext);
  double total = 0.0;
  std::size_t active = 0, last = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ext[i] = std::max(0.0, epsilon_ + ext[i]);
    if (ext[i] > 0.0) {
      total += ext[i];
      ++active;
      last = i;
    }
  }
  if (active == 1) {
    const VecView mode = modes_.mode(last);
    std::copy(mode.begin(), mode.end(), out.begin());
    return 1;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (ext[i] == 0.0) continue;
    const double w = ext[i] / total;
    const VecView mode = modes_.mode(i);
    for (std::size_t k = 0; k < D; ++k) out[k] += w * mode[k];
  }
  return active;
}

GeneratedBatch generate_batch(const GeneratorStar& gstar, std::size_t n,
                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_batch: n must be >= 1");
  const std::size_t d = gstar.latent_dim(), D = gstar.ambient_dim(), m = gstar.frame().count();
  Matrix latents(n, d), points(n, D);
  std::vector<std::uint32_t> active(n);
  for_each_gaussian_block(n, d, seed, [&](const GaussianBlock& block) {
    Vec scratch(m);
    for (std::size_t s = 0; s < block.count; ++s) {
      const std::size_t row = block.begin + s;
      const auto z = block.latents.subspan(s * d, d);
      std::copy(z.begin(), z.end(), latents.row_mut(row).begin());
      active[row] = static_cast<std::uint32_t>(gstar.generate_into(z, points.row_mut(row), scratch));
    }
  });
  return GeneratedBatch{SampleSet(std::move(points), Provenance::fake, std::nullopt, seed),
                        std::move(latents), std::move(active)};
}

double lipschitz_probe(const GeneratorStar& gstar, std::size_t n_pairs, std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("lipschitz_probe: n_pairs must be >= 1");
  const SimplexFrame& frame = gstar.frame();
  const std::size_t d = gstar.latent_dim(), D = gstar.ambient_dim(), m = frame.count();
  const double eps = gstar.epsilon();
  const std::size_t blocks = block_count(n_pairs);
  std::vector<double> best(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    RandomStream rng(derive_seed(seed, 0x4c495053), b);
    Vec z(d), zp(d), gz(D), gzp(D), scratch(m), margins(m);
    const std::size_t begin = b * kBlockSize;
    const std::size_t count = std::min(kBlockSize, n_pairs - begin);
    double local = 0.0;
    auto ratio = [&]() {
      const double dz = distance(z, zp);
      if (dz == 0.0) return;
      gstar.generate_into(z, gz, scratch);
      gstar.generate_into(zp, gzp, scratch);
      local = std::max(local, distance(gz, gzp) / dz);
    };
    for (std::size_t s = 0; s < count; ++s) {
      // Independent Gaussian pair.
      rng.fill_normal(z);
      rng.fill_normal(zp);
      ratio();
      // Pair straddling the band around the nearest bisector of a fresh latent.
      rng.fill_normal(z);
      const std::size_t i = frame.cell_index(z);
      std::size_t j = i == 0 ? 1 : 0;
      double best_dot = INFINITY;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i) continue;
        const double t = dot(z, frame.normal(i, k));
        if (t < best_dot) {
          best_dot = t;
          j = k;
        }
      }
      const VecView n = frame.normal(i, j);
      const double shift = (2.0 * rng.uniform() - 1.0) * 1.2 * eps - best_dot;
      for (std::size_t k = 0; k < d; ++k) z[k] += shift * n[k];
      for (std::size_t k = 0; k < d; ++k) zp[k] = z[k] + 0.1 * eps * rng.normal();
      ratio();
    }
    best[b] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace latgeo
