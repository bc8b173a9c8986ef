#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "latgeo/frame.hpp"
#include "latgeo/generator.hpp"
#include "latgeo/measure.hpp"

namespace latgeo {

/// A closed-form precision bound. The remainder is a magnitude with unit
/// constant, kept apart from the leading value.
struct BoundReport {
  std::string bound_name;
  double epsilon = 0.0;              // eps_min for upper bounds, eps_max for lower
  std::size_t m = 0;
  std::optional<std::size_t> d;
  std::optional<double> lipschitz;
  double leading_value = 0.0;
  double order_term = 0.0;
  std::string regime;                // "finite", "asymptotic", "m<=d" or "m>d"
  bool valid = true;                 // false when vacuous or dominated by the remainder
  std::optional<bool> precondition_met;
};

/// 1 - eps (1 - eps sqrt(2 ln m)) / sqrt(2 pi). Invalid once the inner factor
/// goes negative. When both d and L are given, records whether L >= d sqrt(ln m).
BoundReport precision_upper_bound(double eps_min, std::size_t m,
                                  std::optional<std::size_t> d = std::nullopt,
                                  std::optional<double> lipschitz = std::nullopt);

/// exp(-eps^2 / 8) exp(-eps sqrt(ln m / 2)), the large-m form.
BoundReport precision_upper_bound_asymptotic(double eps_min, std::size_t m);

/// Precision attainable by a well-balanced generator. For m <= d the leading
/// term is 1 - eps sqrt(pi ln m) / sqrt 2 with remainder eps ln m / m; for
/// m > d it is 1 - eps ln d / sqrt(2 pi) with remainder m / (d ln d).
BoundReport precision_lower_bound(double eps_max, std::size_t m, std::size_t d);

/// Hyperplanes sufficient to give m points in general position in R^d
/// distinct sign patterns: max(ceil(log2 m), max(0, ceil((m - 2^ceil(log2 d)) / d)) + ceil(log2 d)).
std::size_t hyperplane_count(std::size_t m, std::size_t d);

struct SandwichReport {
  MeasureEstimate alpha_hat;   // memorized fraction of the generator
  MeasureEstimate boundary_max;  // boundary measure at eps_max
  MeasureEstimate boundary_min;  // boundary measure at eps_min
  double eps_min = 0.0;
  double eps_max = 0.0;
  double lower = 0.0;          // 1 - boundary_max
  double upper = 0.0;          // 1 - boundary_min
  double slack_lower = 0.0;    // 3 combined standard errors
  double slack_upper = 0.0;
  bool holds = false;
};

/// Estimates the precision of a generator built at eps_max and brackets it
/// between the complements of the boundary measures at eps_max and eps_min.
/// All three estimates share one latent sample.
SandwichReport sandwich_check(const GeneratorStar& gstar, std::size_t n_samples,
                              std::uint64_t seed,
                              BoundaryMethod method = BoundaryMethod::margin);

}  // namespace latgeo
