#include "latgeo/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latgeo/metrics.hpp"

namespace latgeo {

namespace {

void check_eps(double eps, bool allow_zero) {
  if (!std::isfinite(eps) || eps < 0.0 || (!allow_zero && eps == 0.0))
    throw std::invalid_argument("bound: epsilon must be positive and finite");
}

void check_m(std::size_t m) {
  if (m < 2) throw std::invalid_argument("bound: m must be >= 2");
}

std::size_t ceil_log2(std::size_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

// Remainder dominance: more than a tenth of the distance to 1.
bool remainder_small(double leading, double order_term) {
  return order_term <= 0.1 * (1.0 - leading);
}

}  // namespace

BoundReport precision_upper_bound(double eps_min, std::size_t m, std::optional<std::size_t> d,
                                  std::optional<double> lipschitz) {
  check_eps(eps_min, true);
  check_m(m);
  const double log_m = std::log(static_cast<double>(m));
  const double factor = 1.0 - eps_min * std::sqrt(2.0 * log_m);
  BoundReport r;
  r.bound_name = "precision_upper";
  r.epsilon = eps_min;
  r.m = m;
  r.d = d;
  r.lipschitz = lipschitz;
  r.leading_value = 1.0 - eps_min * factor / std::sqrt(2.0 * std::numbers::pi);
  r.regime = "finite";
  r.valid = factor >= 0.0;
  if (d && lipschitz) r.precondition_met = *lipschitz >= static_cast<double>(*d) * std::sqrt(log_m);
  return r;
}

BoundReport precision_upper_bound_asymptotic(double eps_min, std::size_t m) {
  check_eps(eps_min, true);
  check_m(m);
  BoundReport r;
  r.bound_name = "precision_upper_asymptotic";
  r.epsilon = eps_min;
  r.m = m;
  r.leading_value = std::exp(-eps_min * eps_min / 8.0) *
                    std::exp(-eps_min * std::sqrt(std::log(static_cast<double>(m)) / 2.0));
  r.regime = "asymptotic";
  return r;
}

BoundReport precision_lower_bound(double eps_max, std::size_t m, std::size_t d) {
  check_eps(eps_max, true);
  check_m(m);
  if (d < 1) throw std::invalid_argument("bound: d must be >= 1");
  BoundReport r;
  r.bound_name = "precision_lower";
  r.epsilon = eps_max;
  r.m = m;
  r.d = d;
  if (m <= d) {
    const double log_m = std::log(static_cast<double>(m));
    r.leading_value = 1.0 - eps_max * std::sqrt(std::numbers::pi * log_m) / std::sqrt(2.0);
    r.order_term = eps_max * log_m / static_cast<double>(m);
    r.regime = "m<=d";
  } else {
    if (d < 2) throw std::invalid_argument("bound: the m > d regime needs d >= 2");
    const double log_d = std::log(static_cast<double>(d));
    r.leading_value = 1.0 - eps_max * log_d / std::sqrt(2.0 * std::numbers::pi);
    r.order_term = static_cast<double>(m) / (static_cast<double>(d) * log_d);
    r.regime = "m>d";
  }
  r.valid = remainder_small(r.leading_value, r.order_term);
  return r;
}

std::size_t hyperplane_count(std::size_t m, std::size_t d) {
  if (m < 2) throw std::invalid_argument("hyperplane_count: m must be >= 2");
  if (d < 2) throw std::invalid_argument("hyperplane_count: d must be >= 2");
  const std::size_t log_d = ceil_log2(d);
  const std::size_t reach = std::size_t{1} << log_d;
  const std::size_t extra = m > reach ? (m - reach + d - 1) / d : 0;
  return std::max(ceil_log2(m), extra + log_d);
}

SandwichReport sandwich_check(const GeneratorStar& gstar, std::size_t n_samples,
                              std::uint64_t seed, BoundaryMethod method) {
  const ModeSet& modes = gstar.modes();
  const double L = gstar.lipschitz_budget();
  SandwichReport r;
  r.eps_max = epsilon_max(modes, L);
  r.eps_min = epsilon_min(modes, L);
  if (std::abs(gstar.epsilon() - r.eps_max) > 1e-12 * r.eps_max)
    throw std::invalid_argument("sandwich_check: generator must be built at epsilon_max");
  const auto batch = generate_batch(gstar, n_samples, seed);
  r.alpha_hat = precision_support(batch.samples, modes, 0.0);
  r.alpha_hat.seed = seed;
  r.boundary_max = boundary_measure(gstar.frame(), r.eps_max, n_samples, seed, method);
  r.boundary_min = boundary_measure(gstar.frame(), r.eps_min, n_samples, seed, method);
  r.lower = 1.0 - r.boundary_max.value;
  r.upper = 1.0 - r.boundary_min.value;
  const double se_a = r.alpha_hat.standard_error();
  r.slack_lower = 3.0 * std::hypot(se_a, r.boundary_max.standard_error());
  r.slack_upper = 3.0 * std::hypot(se_a, r.boundary_min.standard_error());
  r.holds = r.alpha_hat.value >= r.lower - r.slack_lower &&
            r.alpha_hat.value <= r.upper + r.slack_upper;
  return r;
}

}  // namespace latgeo
