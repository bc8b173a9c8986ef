#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "latgeo/generator.hpp"
#include "latgeo/knn.hpp"
#include "latgeo/measure.hpp"
#include "latgeo/samples.hpp"

namespace latgeo {

using ParamValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// One named scalar with an optional 95% interval and the parameters that
/// produced it.
struct MetricReport {
  std::string metric;
  double value = 0.0;
  std::optional<std::pair<double, double>> ci;
  std::optional<std::uint64_t> seed;
  std::map<std::string, ParamValue> params;
};

/// Tolerance actually used by the support metrics: tol itself, or
/// 1e-9 * (1 + diameter) when tol == 0.
double effective_support_tol(const ModeSet& modes, double tol);

/// Fraction of fake points within tol of some mode centre.
MeasureEstimate precision_support(const SampleSet& fake, const ModeSet& modes, double tol = 0.0);

/// Fraction of modes with at least one fake point within tol.
MeasureEstimate recall_support(const SampleSet& fake, const ModeSet& modes, double tol = 0.0);

/// Density: (1 / (k n_fake)) sum over fake and real points of
/// [fake in the closed k-NN ball of the real point]. May exceed 1.
double density(const SampleSet& real, const SampleSet& fake, std::size_t k,
               NeighborSearch method = NeighborSearch::tree);

/// Coverage: fraction of real k-NN balls containing at least one fake point.
double coverage(const SampleSet& real, const SampleSet& fake, std::size_t k,
                NeighborSearch method = NeighborSearch::tree);

struct EquilibriumReport {
  double kl = 0.0;                   // KL(uniform || smoothed cell shares)
  std::size_t empty_cells = 0;       // real cells receiving no fake point
  std::vector<std::size_t> counts;   // fake points per real cell
};

/// Assigns each fake point to its nearest real point (lowest index on ties)
/// and compares the cell occupancy with the uniform distribution. Every cell
/// count is smoothed by 1 / n_fake.
EquilibriumReport equilibrium(const SampleSet& real, const SampleSet& fake);

/// Draws n points from a law with the given seed.
using Sampler = std::function<SampleSet(std::size_t n, std::uint64_t seed)>;

/// Uniform law over the listed atoms (rows of modes), real or fake.
Sampler atom_law(const ModeSet& modes, std::vector<std::size_t> atoms, Provenance provenance);

/// Equal-weight isotropic Gaussian mixture on the listed mode centres.
Sampler gaussian_mixture_law(const ModeSet& modes, std::vector<std::size_t> components,
                             double sigma, Provenance provenance);

/// k(n) = ceil(sqrt(ln n)), at least 1.
std::size_t coverage_k(std::size_t n);

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double coverage = 0.0;
  double error = 0.0;  // |coverage - beta_true|
};

/// Coverage with k(n) for equal real and fake sample sizes along an increasing
/// schedule. Each n draws fresh samples from seeds derived from seed.
std::vector<ConvergenceRow> coverage_convergence(const Sampler& real_law, const Sampler& fake_law,
                                                 double beta_true,
                                                 const std::vector<std::size_t>& n_schedule,
                                                 std::uint64_t seed);

}  // namespace latgeo
