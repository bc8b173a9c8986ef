#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "latgeo/generator.hpp"
#include "latgeo/linalg.hpp"

namespace latgeo {

/// Black-box generator R^d -> R^D.
using LatentMap = std::function<Vec(VecView)>;
/// Black-box classifier R^D -> {0, ..., classes - 1}.
using Labeler = std::function<int(VecView)>;

/// Seeded latents with the classes of their images.
struct LabeledLatentSet {
  std::size_t dim = 0;
  std::size_t classes = 0;
  Matrix latents;
  std::vector<int> labels;
  std::uint64_t seed = 0;
};

/// Nearest mode centre, lowest index on ties.
Labeler nearest_mode_labeler(const ModeSet& modes);

/// The blending generator as a black box.
LatentMap as_latent_map(const GeneratorStar& gstar);

/// n seeded standard Gaussian latents in R^dim labelled by labeler(generator(z)).
/// Throws std::out_of_range if the labeler returns a class outside [0, classes).
LabeledLatentSet label_latents(const LatentMap& generator, const Labeler& labeler,
                               std::size_t dim, std::size_t classes, std::size_t n,
                               std::uint64_t seed);

/// Multinomial logistic regression: class scores W z + b.
struct LinearModel {
  Matrix weights;  // classes x dim
  Vec biases;      // classes
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  double final_loss = 0.0;

  LinearModel() = default;
  LinearModel(std::size_t classes, std::size_t dim);

  /// Highest score, lowest index on ties.
  int predict(VecView z) const;
};

struct LossGradient {
  double loss = 0.0;  // mean softmax cross-entropy
  Matrix grad_weights;
  Vec grad_biases;
};

/// Mean cross-entropy over the listed rows and its gradient.
LossGradient softmax_loss_gradient(const LinearModel& model, const Matrix& latents,
                                   const std::vector<int>& labels,
                                   const std::vector<std::size_t>& rows);

struct LogRegResult {
  LinearModel model;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

/// Full-batch gradient descent from zero on a seeded shuffled split.
/// Throws std::runtime_error if the loss becomes non-finite.
LogRegResult train_logreg(const LabeledLatentSet& data, double split = 0.8,
                          double learning_rate = 0.5, std::size_t epochs = 500,
                          std::uint64_t seed = 0);

struct ConvexityResult {
  double accuracy = 0.0;
  std::size_t interpolants = 0;
  std::size_t attempts = 0;  // second endpoints drawn
};

/// For n_pairs latent pairs with equal labels, the fraction of the interior
/// points t z0 + (1 - t) z1, t = k / (n_interp + 1), that keep the label.
/// Throws std::runtime_error when a pair needs more than max_attempts draws.
ConvexityResult convexity_probe(const LatentMap& generator, const Labeler& labeler,
                                std::size_t dim, std::size_t n_pairs, std::size_t n_interp,
                                std::uint64_t seed, std::size_t max_attempts = 1'000'000);

}  // namespace latgeo
