#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latgeo/frame.hpp"
#include "latgeo/linalg.hpp"
#include "latgeo/samples.hpp"

namespace latgeo {

/// m >= 2 pairwise-distinct mode centres in R^ambient_dim.
class ModeSet {
 public:
  explicit ModeSet(Matrix modes);

  std::size_t count() const { return modes_.rows(); }
  std::size_t ambient_dim() const { return modes_.cols(); }
  const Matrix& modes() const { return modes_; }
  VecView mode(std::size_t i) const { return modes_.row(i); }
  /// Largest pairwise distance D.
  double diameter() const { return diameter_; }
  /// Smallest pairwise distance.
  double min_gap() const { return min_gap_; }

 private:
  Matrix modes_;
  double diameter_ = 0.0;
  double min_gap_ = 0.0;
};

/// min_gap / L: radius of the latent band that any L-Lipschitz generator
/// must spend travelling between the two closest modes.
double epsilon_min(const ModeSet& modes, double lipschitz);

/// diameter * sqrt(m) / L: the extension radius at which the blending
/// generator below is L-Lipschitz.
double epsilon_max(const ModeSet& modes, double lipschitz);

/// The blending generator over a latent partition. Inside a cell, away from
/// the others' epsilon-extensions, it returns that cell's mode exactly; on
/// overlaps it returns the convex combination of the active modes weighted by
/// each latent's depth inside the corresponding cell extension.
class GeneratorStar {
 public:
  /// Requires frame.count() == modes.count(), epsilon > 0 and
  /// lipschitz > modes.diameter().
  GeneratorStar(SimplexFrame frame, ModeSet modes, double epsilon, double lipschitz);

  /// The generator at epsilon = epsilon_max(modes, lipschitz).
  static GeneratorStar at_epsilon_max(SimplexFrame frame, ModeSet modes, double lipschitz);

  const SimplexFrame& frame() const { return frame_; }
  const ModeSet& modes() const { return modes_; }
  double epsilon() const { return epsilon_; }
  double lipschitz_budget() const { return lipschitz_; }
  std::size_t latent_dim() const { return frame_.dim(); }
  std::size_t ambient_dim() const { return modes_.ambient_dim(); }

  /// max(0, epsilon + margin(z, i)): distance from z to the complement of
  /// the epsilon-extension of cell i (polyhedral surrogate, exact off ridges).
  double extension_distance(std::size_t i, VecView z) const;

  /// Indices of the cell extensions containing z, ascending. Never empty.
  std::vector<std::size_t> active_set(VecView z) const;

  /// Blending weights for every cell (zero outside the active set).
  Vec weights(VecView z) const;

  Vec generate(VecView z) const;

  /// Allocation-free form of generate: writes G(z) into out (ambient_dim)
  /// using scratch (size >= count) and returns |S_z|.
  std::size_t generate_into(VecView z, std::span<double> out,
                            std::span<double> scratch) const;

 private:
  SimplexFrame frame_;
  ModeSet modes_;
  double epsilon_;
  double lipschitz_;
};

struct GeneratedBatch {
  SampleSet samples;                       // fake points, seed recorded
  Matrix latents;                          // the latents that produced them
  std::vector<std::uint32_t> active_sizes; // |S_z| per sample
};

/// Pushes n seeded standard Gaussian latents through the generator.
GeneratedBatch generate_batch(const GeneratorStar& gstar, std::size_t n,
                              std::uint64_t seed);

/// Largest observed |G(z) - G(z')| / |z - z'| over n_pairs independent
/// Gaussian pairs and n_pairs close pairs straddling the blending bands
/// (perturbation scale epsilon / 10).
double lipschitz_probe(const GeneratorStar& gstar, std::size_t n_pairs,
                       std::uint64_t seed);

}  // namespace latgeo
