#include "latgeo/normal.hpp"

#include <cmath>
#include <numbers>

namespace latgeo {

double normal_cdf(double x) {
  // erfc keeps full relative accuracy in the lower tail.
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double strip_measure(double half_width) {
  if (half_width <= 0.0) return 0.0;
  return std::erf(half_width / std::numbers::sqrt2);
}

}  // namespace latgeo
