#include "latgeo/probes.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latgeo/knn.hpp"
#include "latgeo/parallel.hpp"
#include "latgeo/random.hpp"

namespace latgeo {

Labeler nearest_mode_labeler(const ModeSet& modes) {
  auto tree = std::make_shared<KdTree>(modes.modes());
  return [tree](VecView x) { return static_cast<int>(tree->nearest(x)); };
}

LatentMap as_latent_map(const GeneratorStar& gstar) {
  auto g = std::make_shared<GeneratorStar>(gstar);
  return [g](VecView z) { return g->generate(z); };
}

LabeledLatentSet label_latents(const LatentMap& generator, const Labeler& labeler,
                               std::size_t dim, std::size_t classes, std::size_t n,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("label_latents: n must be >= 1");
  if (classes < 1) throw std::invalid_argument("label_latents: classes must be >= 1");
  LabeledLatentSet out;
  out.dim = dim;
  out.classes = classes;
  out.seed = seed;
  out.latents = Matrix(n, dim);
  out.labels.assign(n, 0);
  for_each_gaussian_block(n, dim, seed, [&](const GaussianBlock& block) {
    for (std::size_t s = 0; s < block.count; ++s) {
      const auto z = block.latents.subspan(s * dim, dim);
      const int y = labeler(generator(z));
      if (y < 0 || static_cast<std::size_t>(y) >= classes)
        throw std::out_of_range("label_latents: labeler returned class " + std::to_string(y) +
                                " outside [0, " + std::to_string(classes) + ")");
      std::copy(z.begin(), z.end(), out.latents.row_mut(block.begin + s).begin());
      out.labels[block.begin + s] = y;
    }
  });
  return out;
}

LinearModel::LinearModel(std::size_t classes, std::size_t dim)
    : weights(classes, dim), biases(classes, 0.0) {}

int LinearModel::predict(VecView z) const {
  int best = 0;
  double best_score = -INFINITY;
  for (std::size_t c = 0; c < weights.rows(); ++c) {
    const double s = dot(weights.row(c), z) + biases[c];
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

LossGradient softmax_loss_gradient(const LinearModel& model, const Matrix& latents,
                                   const std::vector<int>& labels,
                                   const std::vector<std::size_t>& rows) {
  const std::size_t m = model.weights.rows(), d = model.weights.cols();
  if (rows.empty()) throw std::invalid_argument("softmax_loss_gradient: no rows");
  LossGradient g;
  g.grad_weights = Matrix(m, d);
  g.grad_biases.assign(m, 0.0);
  Vec p(m);
  for (std::size_t r : rows) {
    const VecView z = latents.row(r);
    double top = -INFINITY;
    for (std::size_t c = 0; c < m; ++c) {
      p[c] = dot(model.weights.row(c), z) + model.biases[c];
      top = std::max(top, p[c]);
    }
    double total = 0.0;
    for (double& x : p) total += (x = std::exp(x - top));
    const std::size_t y = static_cast<std::size_t>(labels[r]);
    g.loss += std::log(total) - std::log(p[y]);
    for (std::size_t c = 0; c < m; ++c) {
      const double coef = p[c] / total - (c == y ? 1.0 : 0.0);
      auto gw = g.grad_weights.row_mut(c);
      for (std::size_t k = 0; k < d; ++k) gw[k] += coef * z[k];
      g.grad_biases[c] += coef;
    }
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  g.loss *= inv;
  for (std::size_t c = 0; c < m; ++c) {
    for (double& x : g.grad_weights.row_mut(c)) x *= inv;
    g.grad_biases[c] *= inv;
  }
  return g;
}

namespace {
double accuracy(const LinearModel& model, const LabeledLatentSet& data,
                const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t ok = 0;
  for (std::size_t r : rows)
    if (model.predict(data.latents.row(r)) == data.labels[r]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}
}  // namespace

LogRegResult train_logreg(const LabeledLatentSet& data, double split, double learning_rate,
                          std::size_t epochs, std::uint64_t seed) {
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("train_logreg: split must be in (0, 1)");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("train_logreg: learning rate must be positive");
  const std::size_t n = data.latents.rows();
  if (n < 2) throw std::invalid_argument("train_logreg: need at least two samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RandomStream rng(derive_seed(seed, 0x53504c54), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);
  const std::size_t n_train =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::round(split * double(n))), 1, n - 1);
  const std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  const std::vector<std::size_t> test(order.begin() + n_train, order.end());

  LogRegResult out;
  out.model = LinearModel(data.classes, data.dim);
  out.model.learning_rate = learning_rate;
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto g = softmax_loss_gradient(out.model, data.latents, data.labels, train);
    if (!std::isfinite(g.loss))
      throw std::runtime_error("train_logreg: loss became non-finite at epoch " + std::to_string(e) +
                               " (learning rate " + std::to_string(learning_rate) + " too high?)");
    for (std::size_t c = 0; c < data.classes; ++c) {
      auto w = out.model.weights.row_mut(c);
      const VecView gw = g.grad_weights.row(c);
      for (std::size_t k = 0; k < data.dim; ++k) w[k] -= learning_rate * gw[k];
      out.model.biases[c] -= learning_rate * g.grad_biases[c];
    }
    out.model.epochs = e + 1;
  }
  out.model.final_loss = softmax_loss_gradient(out.model, data.latents, data.labels, train).loss;
  if (!std::isfinite(out.model.final_loss))
    throw std::runtime_error("train_logreg: final loss is non-finite");
  out.n_train = train.size();
  out.n_test = test.size();
  out.train_accuracy = accuracy(out.model, data, train);
  out.test_accuracy = accuracy(out.model, data, test);
  return out;
}

ConvexityResult convexity_probe(const LatentMap& generator, const Labeler& labeler,
                                std::size_t dim, std::size_t n_pairs, std::size_t n_interp,
                                std::uint64_t seed, std::size_t max_attempts) {
  if (n_interp < 1) throw std::invalid_argument("convexity_probe: n_interp must be >= 1");
  if (n_pairs < 1) throw std::invalid_argument("convexity_probe: n_pairs must be >= 1");
  if (dim < 1) throw std::invalid_argument("convexity_probe: dim must be >= 1");
  const std::size_t blocks = block_count(n_pairs);
  std::vector<std::size_t> kept(blocks, 0), tries(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    RandomStream rng(derive_seed(seed, 0x434f4e56), b);
    Vec z0(dim), z1(dim), zt(dim);
    const std::size_t count = std::min(kBlockSize, n_pairs - b * kBlockSize);
    for (std::size_t s = 0; s < count; ++s) {
      rng.fill_normal(z0);
      const int y = labeler(generator(z0));
      std::size_t attempts = 0;
      do {
        if (attempts == max_attempts)
          throw std::runtime_error("convexity_probe: no second latent with label " +
                                   std::to_string(y) + " after " + std::to_string(max_attempts) +
                                   " attempts");
        rng.fill_normal(z1);
        ++attempts;
      } while (labeler(generator(z1)) != y);
      tries[b] += attempts;
      for (std::size_t k = 1; k <= n_interp; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n_interp + 1);
        for (std::size_t i = 0; i < dim; ++i) zt[i] = t * z0[i] + (1.0 - t) * z1[i];
        if (labeler(generator(zt)) == y) ++kept[b];
      }
    }
  });
  ConvexityResult out;
  out.interpolants = n_pairs * n_interp;
  out.attempts = std::accumulate(tries.begin(), tries.end(), std::size_t{0});
  out.accuracy = static_cast<double>(std::accumulate(kept.begin(), kept.end(), std::size_t{0})) /
                 static_cast<double>(out.interpolants);
  return out;
}

}  // namespace latgeo
