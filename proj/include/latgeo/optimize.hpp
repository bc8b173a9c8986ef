#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "latgeo/frame.hpp"
#include "latgeo/measure.hpp"

namespace latgeo {

/// Boundary fraction at eps plus penalty * sum_i (cell fraction_i - 1/m)^2,
/// estimated on a fixed latent sample.
struct PartitionObjective {
  double value = 0.0;
  MeasureEstimate boundary;
  std::vector<double> cell_fractions;
  double imbalance = 0.0;  // sum_i (fraction_i - 1/m)^2
};

/// Evaluates the objective for the frame on n seeded Gaussian latents.
PartitionObjective partition_objective(const SimplexFrame& frame, double epsilon,
                                       std::size_t n_samples, std::uint64_t seed,
                                       double penalty = 10.0);

struct OptimizeOptions {
  std::size_t n_samples = 20'000;
  std::size_t iters = 200;
  double step = 0.3;
  std::size_t restarts = 8;
  double penalty = 10.0;
  double decay = 0.9;
  /// Extra starting frame (unit directions, m x d), tried before the random restarts.
  std::optional<Matrix> warm_start;
};

struct OptimizeResult {
  SimplexFrame frame;
  double objective = 0.0;        // on the optimization sample
  std::size_t best_restart = 0;  // 0 is the warm start when one was given
  std::vector<double> restart_objectives;
};

/// Random-restart local search over m unit directions in R^d. Each step moves
/// every direction by a Gaussian kick of size step and renormalizes; the step
/// shrinks by decay after a non-improving proposal. All candidates are scored
/// on one common latent sample.
OptimizeResult optimize_directions(std::size_t m, std::size_t d, double epsilon,
                                   std::uint64_t seed, const OptimizeOptions& options = {});

/// The regular simplex frame with unit-norm directions.
SimplexFrame unit_simplex(std::size_t m, std::size_t d);

/// m unit directions in the plane at equal angles.
SimplexFrame equal_angle_fan(std::size_t m);

/// Angles in degrees between frame directions, pairs (i, j) with i < j in order.
std::vector<double> pairwise_angles_degrees(const SimplexFrame& frame);

struct SweepRow {
  std::size_t d = 0;
  double epsilon_max = 0.0;
  MeasureEstimate alpha_hat;
  double lower_bound = 0.0;   // leading term of the attainable-precision bound
  double lower_order_term = 0.0;
  bool lower_valid = true;
  double upper_bound = 0.0;   // finite-m upper bound at eps_min
  bool upper_valid = true;
  bool optimized = false;     // directions found by search rather than the simplex
};

struct SweepOptions {
  std::size_t ambient_dim = 2;
  double lipschitz_multiplier = 10.0;  // L = multiplier * D sqrt(m), so eps_max = 1 / multiplier
  std::size_t n_samples = 100'000;
  OptimizeOptions optimizer;
};

/// For each d: regular simplex when m <= d + 1, otherwise optimized
/// directions (warm-started from the previous d padded with zeros); then the
/// generator at eps_max on seeded random modes, its memorized fraction on
/// fresh latents and the bound values.
std::vector<SweepRow> dimension_sweep(std::size_t m, const std::vector<std::size_t>& d_list,
                                      std::uint64_t seed, const SweepOptions& options = {});

}  // namespace latgeo
