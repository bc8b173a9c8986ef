#pragma once

namespace latgeo {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Standard normal CDF.
double normal_cdf(double x);

/// Gaussian measure of the strip {|<z, n>| <= half_width} for a unit normal n:
/// 2 Phi(half_width) - 1.
double strip_measure(double half_width);

}  // namespace latgeo
