#include "latgeo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latgeo/bounds.hpp"
#include "latgeo/generator.hpp"
#include "latgeo/metrics.hpp"
#include "latgeo/parallel.hpp"
#include "latgeo/random.hpp"

namespace latgeo {

namespace {

struct Tally {
  std::uint64_t boundary = 0;
  std::vector<std::uint64_t> cells;
};

// Scores s_i = <z, u_i>; the own cell is the argmax (lowest index on ties),
// which for equal-norm directions is the nearest direction. The margin is
// min_j (s_own - s_j) / |u_own - u_j|.
Tally tally(const Matrix& directions, const Matrix& latents, double epsilon) {
  const std::size_t m = directions.rows(), n = latents.rows();
  std::vector<double> inv_gap(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) inv_gap[i * m + j] = 1.0 / distance(directions.row(i), directions.row(j));
  const std::size_t blocks = block_count(n);
  std::vector<std::uint64_t> hits(blocks, 0), cells(blocks * m, 0);
  parallel_for(blocks, [&](std::size_t b) {
    Vec s(m);
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t r = b * kBlockSize; r < end; ++r) {
      const VecView z = latents.row(r);
      std::size_t own = 0;
      for (std::size_t i = 0; i < m; ++i) {
        s[i] = dot(z, directions.row(i));
        if (s[i] > s[own]) own = i;
      }
      double margin = INFINITY;
      for (std::size_t j = 0; j < m; ++j)
        if (j != own) margin = std::min(margin, (s[own] - s[j]) * inv_gap[own * m + j]);
      if (margin <= epsilon) ++hits[b];
      ++cells[b * m + own];
    }
  });
  Tally t;
  t.cells.assign(m, 0);
  for (std::size_t b = 0; b < blocks; ++b) {
    t.boundary += hits[b];
    for (std::size_t i = 0; i < m; ++i) t.cells[i] += cells[b * m + i];
  }
  return t;
}

Matrix gaussian_latents(std::size_t n, std::size_t d, std::uint64_t seed) {
  Matrix out(n, d);
  for_each_gaussian_block(n, d, seed, [&](const GaussianBlock& block) {
    std::copy(block.latents.begin(), block.latents.end(), out.row_mut(block.begin).begin());
  });
  return out;
}

PartitionObjective score(const Tally& t, std::size_t n, std::uint64_t seed, double penalty) {
  PartitionObjective o;
  const double m = static_cast<double>(t.cells.size());
  o.boundary = MeasureEstimate::from_counts(t.boundary, n, seed);
  for (std::uint64_t c : t.cells) {
    const double f = static_cast<double>(c) / static_cast<double>(n);
    o.cell_fractions.push_back(f);
    o.imbalance += (f - 1.0 / m) * (f - 1.0 / m);
  }
  o.value = o.boundary.value + penalty * o.imbalance;
  return o;
}

void normalize_rows(Matrix& dirs) {
  for (std::size_t i = 0; i < dirs.rows(); ++i) {
    auto row = dirs.row_mut(i);
    const double r = norm(row);
    for (double& x : row) x /= r;
  }
}

bool distinct_rows(const Matrix& dirs) {
  for (std::size_t i = 0; i < dirs.rows(); ++i)
    for (std::size_t j = i + 1; j < dirs.rows(); ++j)
      if (distance(dirs.row(i), dirs.row(j)) < 1e-9) return false;
  return true;
}

}  // namespace

PartitionObjective partition_objective(const SimplexFrame& frame, double epsilon,
                                       std::size_t n_samples, std::uint64_t seed, double penalty) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("partition_objective: epsilon must be positive");
  if (n_samples < 100) throw std::invalid_argument("partition_objective: n_samples must be >= 100");
  const Matrix latents = gaussian_latents(n_samples, frame.dim(), seed);
  return score(tally(frame.directions(), latents, epsilon), n_samples, seed, penalty);
}

OptimizeResult optimize_directions(std::size_t m, std::size_t d, double epsilon,
                                   std::uint64_t seed, const OptimizeOptions& options) {
  if (m < 2) throw std::invalid_argument("optimize_directions: m must be >= 2");
  if (d < 2) throw std::invalid_argument("optimize_directions: d must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("optimize_directions: epsilon must be positive");
  if (options.n_samples < 100) throw std::invalid_argument("optimize_directions: n_samples must be >= 100");
  if (!(options.step > 0.0) || !(options.decay > 0.0 && options.decay <= 1.0))
    throw std::invalid_argument("optimize_directions: step must be positive and decay in (0, 1]");
  if (options.warm_start && (options.warm_start->rows() != m || options.warm_start->cols() != d))
    throw std::invalid_argument("optimize_directions: warm start must be m x d");

  const std::uint64_t sample_seed = derive_seed(seed, 0x4f424a);
  const Matrix latents = gaussian_latents(options.n_samples, d, sample_seed);
  auto objective = [&](const Matrix& dirs) {
    return score(tally(dirs, latents, epsilon), options.n_samples, sample_seed, options.penalty).value;
  };

  std::vector<Matrix> starts;
  if (options.warm_start) {
    starts.push_back(*options.warm_start);
    normalize_rows(starts.back());
  }
  for (std::size_t r = 0; r < options.restarts; ++r) {
    RandomStream rng(derive_seed(seed, 0x494e4954), r);
    Matrix dirs(m, d);
    do {
      for (std::size_t i = 0; i < m; ++i) rng.fill_normal(dirs.row_mut(i));
      normalize_rows(dirs);
    } while (!distinct_rows(dirs));
    starts.push_back(std::move(dirs));
  }
  if (starts.empty()) throw std::invalid_argument("optimize_directions: no restarts");

  std::vector<double> finals;
  Matrix best_dirs;
  double best = INFINITY;
  std::size_t best_restart = 0;
  const double kick = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t r = 0; r < starts.size(); ++r) {
    RandomStream rng(derive_seed(seed, 0x53544550), r);
    Matrix current = starts[r];
    double value = objective(current);
    double step = options.step;
    for (std::size_t it = 0; it < options.iters; ++it) {
      Matrix proposal = current;
      for (std::size_t i = 0; i < m; ++i)
        for (double& x : proposal.row_mut(i)) x += step * kick * rng.normal();
      normalize_rows(proposal);
      if (!distinct_rows(proposal)) {
        step *= options.decay;
        continue;
      }
      const double v = objective(proposal);
      if (v < value) {
        value = v;
        current = std::move(proposal);
      } else {
        step *= options.decay;
      }
    }
    finals.push_back(value);
    if (value < best) {
      best = value;
      best_dirs = current;
      best_restart = r;
    }
  }
  return OptimizeResult{directions_frame(best_dirs), best, best_restart, finals};
}

SimplexFrame unit_simplex(std::size_t m, std::size_t d) {
  if (m < 2) throw std::invalid_argument("unit_simplex: m must be >= 2");
  // Circumradius of a regular simplex with side s is s sqrt((m - 1) / (2 m)).
  return equidistant_points(m, d, std::sqrt(2.0 * double(m) / double(m - 1)));
}

SimplexFrame equal_angle_fan(std::size_t m) {
  if (m < 2) throw std::invalid_argument("equal_angle_fan: m must be >= 2");
  Matrix dirs(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = 2.0 * std::numbers::pi * double(i) / double(m);
    dirs.row_mut(i)[0] = std::cos(a);
    dirs.row_mut(i)[1] = std::sin(a);
  }
  return directions_frame(dirs);
}

std::vector<double> pairwise_angles_degrees(const SimplexFrame& frame) {
  std::vector<double> out;
  for (std::size_t i = 0; i < frame.count(); ++i)
    for (std::size_t j = i + 1; j < frame.count(); ++j) {
      const VecView a = frame.direction(i), b = frame.direction(j);
      const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
      out.push_back(std::acos(c) * 180.0 / std::numbers::pi);
    }
  return out;
}

std::vector<SweepRow> dimension_sweep(std::size_t m, const std::vector<std::size_t>& d_list,
                                      std::uint64_t seed, const SweepOptions& options) {
  if (m < 2) throw std::invalid_argument("dimension_sweep: m must be >= 2");
  if (d_list.empty()) throw std::invalid_argument("dimension_sweep: empty dimension list");
  for (std::size_t d : d_list)
    if (d < 2) throw std::invalid_argument("dimension_sweep: every d must be >= 2");
  if (!(options.lipschitz_multiplier > 1.0 / std::sqrt(double(m))))
    throw std::invalid_argument("dimension_sweep: Lipschitz multiplier too small for L > D");

  Matrix raw(m, options.ambient_dim);
  RandomStream mode_rng(derive_seed(seed, 0x4d4f4445), 0);
  for (std::size_t i = 0; i < m; ++i) mode_rng.fill_normal(raw.row_mut(i));
  const ModeSet modes(raw);
  const double L = options.lipschitz_multiplier * modes.diameter() * std::sqrt(double(m));

  std::vector<SweepRow> rows;
  std::optional<Matrix> previous;  // last optimized directions
  for (std::size_t t = 0; t < d_list.size(); ++t) {
    const std::size_t d = d_list[t];
    SweepRow row;
    row.d = d;
    std::optional<SimplexFrame> frame;
    if (m <= d + 1) {
      frame = unit_simplex(m, d);
    } else {
      OptimizeOptions opt = options.optimizer;
      if (previous && previous->cols() <= d) {
        Matrix padded(m, d);
        for (std::size_t i = 0; i < m; ++i)
          std::copy(previous->row(i).begin(), previous->row(i).end(), padded.row_mut(i).begin());
        opt.warm_start = std::move(padded);
      }
      auto result = optimize_directions(m, d, 1.0 / options.lipschitz_multiplier,
                                        derive_seed(seed, 0x4f5054 + d), opt);
      previous = result.frame.directions();
      frame = std::move(result.frame);
      row.optimized = true;
    }
    const auto g = GeneratorStar::at_epsilon_max(*frame, modes, L);
    row.epsilon_max = g.epsilon();
    const auto batch = generate_batch(g, options.n_samples, derive_seed(seed, 0x414c5048 + d));
    row.alpha_hat = precision_support(batch.samples, modes, 0.0);
    const auto lower = precision_lower_bound(row.epsilon_max, m, d);
    row.lower_bound = lower.leading_value;
    row.lower_order_term = lower.order_term;
    row.lower_valid = lower.valid;
    const auto upper = precision_upper_bound(epsilon_min(modes, L), m, d, L);
    row.upper_bound = upper.leading_value;
    row.upper_valid = upper.valid;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace latgeo
