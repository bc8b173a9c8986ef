#include "latgeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latgeo/parallel.hpp"
#include "latgeo/random.hpp"

namespace latgeo {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
}

// Per-real-point fake counts inside the k-NN balls. With stop_at_one the
// counts are clipped to 1, which is all coverage needs.
std::vector<std::size_t> ball_counts(const SampleSet& real, const SampleSet& fake, std::size_t k,
                                     NeighborSearch method, bool stop_at_one) {
  check_dims(real.ambient_dim(), fake.ambient_dim(), "density/coverage");
  const std::vector<double> radii = knn_radii(real.points(), k, method);
  const std::size_t n = real.size();
  std::vector<std::size_t> counts(n, 0);
  const std::size_t blocks = block_count(n);
  if (method == NeighborSearch::brute_force) {
    parallel_for(blocks, [&](std::size_t b) {
      for (std::size_t i = b * kBlockSize; i < std::min(n, (b + 1) * kBlockSize); ++i)
        for (std::size_t j = 0; j < fake.size(); ++j)
          if (distance(real.point(i), fake.point(j)) <= radii[i]) {
            ++counts[i];
            if (stop_at_one) break;
          }
    });
    return counts;
  }
  const KdTree tree(fake.points());
  parallel_for(blocks, [&](std::size_t b) {
    for (std::size_t i = b * kBlockSize; i < std::min(n, (b + 1) * kBlockSize); ++i)
      counts[i] = stop_at_one ? std::size_t{tree.any_within(real.point(i), radii[i])}
                              : tree.count_within(real.point(i), radii[i]);
  });
  return counts;
}

}  // namespace

double effective_support_tol(const ModeSet& modes, double tol) {
  if (!(tol >= 0.0) || !std::isfinite(tol))
    throw std::invalid_argument("support tolerance must be finite and nonnegative");
  return tol == 0.0 ? 1e-9 * (1.0 + modes.diameter()) : tol;
}

MeasureEstimate precision_support(const SampleSet& fake, const ModeSet& modes, double tol) {
  check_dims(fake.ambient_dim(), modes.ambient_dim(), "precision_support");
  const double r = effective_support_tol(modes, tol);
  const KdTree tree(modes.modes());
  std::uint64_t hits = 0;
  for (std::size_t j = 0; j < fake.size(); ++j)
    if (tree.any_within(fake.point(j), r)) ++hits;
  return MeasureEstimate::from_counts(hits, fake.size(), fake.seed().value_or(0));
}

MeasureEstimate recall_support(const SampleSet& fake, const ModeSet& modes, double tol) {
  check_dims(fake.ambient_dim(), modes.ambient_dim(), "recall_support");
  const double r = effective_support_tol(modes, tol);
  const KdTree tree(fake.points());
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < modes.count(); ++i)
    if (tree.any_within(modes.mode(i), r)) ++hits;
  return MeasureEstimate::from_counts(hits, modes.count(), fake.seed().value_or(0));
}

double density(const SampleSet& real, const SampleSet& fake, std::size_t k, NeighborSearch method) {
  const auto counts = ball_counts(real, fake, k, method, false);
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  return total / (static_cast<double>(k) * static_cast<double>(fake.size()));
}

double coverage(const SampleSet& real, const SampleSet& fake, std::size_t k, NeighborSearch method) {
  const auto counts = ball_counts(real, fake, k, method, true);
  const double covered = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  return covered / static_cast<double>(real.size());
}

EquilibriumReport equilibrium(const SampleSet& real, const SampleSet& fake) {
  check_dims(real.ambient_dim(), fake.ambient_dim(), "equilibrium");
  const std::size_t n = real.size(), f = fake.size();
  if (n < 2) throw std::invalid_argument("equilibrium: need at least two real points");
  const KdTree tree(real.points());
  std::vector<std::size_t> cell(f);
  parallel_for(block_count(f), [&](std::size_t b) {
    for (std::size_t j = b * kBlockSize; j < std::min(f, (b + 1) * kBlockSize); ++j)
      cell[j] = tree.nearest(fake.point(j));
  });
  EquilibriumReport out;
  out.counts.assign(n, 0);
  for (std::size_t c : cell) ++out.counts[c];
  out.empty_cells = static_cast<std::size_t>(std::count(out.counts.begin(), out.counts.end(), 0));
  // Cell shares proportional to count + 1/f, i.e. to count * f + 1, kept in
  // integers so that equal counts give exactly zero.
  double total = 0.0;
  for (std::size_t c : out.counts) total += static_cast<double>(c) * static_cast<double>(f) + 1.0;
  double kl = 0.0;
  for (std::size_t c : out.counts) {
    const double w = static_cast<double>(c) * static_cast<double>(f) + 1.0;
    kl += std::log(total / (static_cast<double>(n) * w));
  }
  out.kl = std::max(0.0, kl / static_cast<double>(n));
  return out;
}

Sampler atom_law(const ModeSet& modes, std::vector<std::size_t> atoms, Provenance provenance) {
  if (atoms.empty()) throw std::invalid_argument("atom_law: no atoms");
  for (std::size_t a : atoms)
    if (a >= modes.count()) throw std::invalid_argument("atom_law: atom index out of range");
  return [modes, atoms, provenance](std::size_t n, std::uint64_t seed) {
    Matrix points(n, modes.ambient_dim());
    RandomStream rng(seed, 0);
    for (std::size_t s = 0; s < n; ++s) {
      const VecView m = modes.mode(atoms[rng.uniform_index(atoms.size())]);
      std::copy(m.begin(), m.end(), points.row_mut(s).begin());
    }
    return SampleSet(std::move(points), provenance, std::nullopt, seed);
  };
}

Sampler gaussian_mixture_law(const ModeSet& modes, std::vector<std::size_t> components,
                             double sigma, Provenance provenance) {
  if (components.empty()) throw std::invalid_argument("gaussian_mixture_law: no components");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_mixture_law: sigma must be positive");
  for (std::size_t a : components)
    if (a >= modes.count())
      throw std::invalid_argument("gaussian_mixture_law: component index out of range");
  return [modes, components, sigma, provenance](std::size_t n, std::uint64_t seed) {
    const std::size_t D = modes.ambient_dim();
    Matrix points(n, D);
    RandomStream rng(seed, 0);
    for (std::size_t s = 0; s < n; ++s) {
      const VecView m = modes.mode(components[rng.uniform_index(components.size())]);
      auto row = points.row_mut(s);
      for (std::size_t k = 0; k < D; ++k) row[k] = m[k] + sigma * rng.normal();
    }
    return SampleSet(std::move(points), provenance, std::nullopt, seed);
  };
}

std::size_t coverage_k(std::size_t n) {
  if (n < 2) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(std::log(double(n))))));
}

std::vector<ConvergenceRow> coverage_convergence(const Sampler& real_law, const Sampler& fake_law,
                                                 double beta_true,
                                                 const std::vector<std::size_t>& n_schedule,
                                                 std::uint64_t seed) {
  if (!(beta_true >= 0.0 && beta_true <= 1.0))
    throw std::invalid_argument("coverage_convergence: beta_true must be in [0, 1]");
  if (n_schedule.empty()) throw std::invalid_argument("coverage_convergence: empty schedule");
  for (std::size_t t = 0; t < n_schedule.size(); ++t) {
    if (n_schedule[t] < 2) throw std::invalid_argument("coverage_convergence: n must be >= 2");
    if (t > 0 && n_schedule[t] <= n_schedule[t - 1])
      throw std::invalid_argument("coverage_convergence: schedule must be increasing");
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : n_schedule) {
    const SampleSet real = real_law(n, derive_seed(seed, 2 * n));
    const SampleSet fake = fake_law(n, derive_seed(seed, 2 * n + 1));
    ConvergenceRow row;
    row.n = n;
    row.k = std::min(coverage_k(n), n - 1);
    row.coverage = coverage(real, fake, row.k);
    row.error = std::abs(row.coverage - beta_true);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace latgeo
