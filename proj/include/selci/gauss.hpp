#pragma once

// Numerically stable scalar Gaussian and chi-square(3) primitives.
//
// Every tail quantity is also exposed in the natural-log domain so that
// downstream code can manipulate events with probability far below the
// smallest normal double (the rare-selection regimes this library targets
// involve probabilities of 1e-12 and truncation windows of mass < 1e-300).

#include <cmath>
#include <limits>

namespace selci {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274;  // log sqrt(2*pi)
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double std_normal_pdf(double z);
double std_normal_log_pdf(double z);

/// Phi(z). Throws std::domain_error on NaN input.
double std_normal_cdf(double z);

/// 1 - Phi(z), computed without cancellation.
double std_normal_sf(double z);

/// log(1 - Phi(z)). Relative accuracy ~1e-13 for all finite z; a Laplace
/// continued fraction takes over past the erfc underflow point, so arguments
/// of 1e6 and beyond are fine.
double std_normal_log_sf(double z);

/// log Phi(z) == std_normal_log_sf(-z).
double std_normal_log_cdf(double z);

/// phi(z)/Phi(z): the hazard of an upper-truncated normal. Stable for very
/// negative z (where it approaches -z).
double std_normal_cdf_ratio(double z);

/// Inverse CDF. Requires 0 < u < 1; accurate to ~2 ulp after refinement.
double std_normal_quantile(double u);

/// Solve log(1 - Phi(z)) = log_p. Accepts log_p << -745 (probabilities far
/// below double underflow). log_p must be <= 0; log_p == 0 gives -inf.
double std_normal_isf_from_log(double log_p);

/// Chi-square with 3 degrees of freedom, in the closed form
/// 2*Phi(sqrt(x)) - 1 - sqrt(x)*exp(-x/2)/sqrt(pi/2).
double chi2_3_cdf(double x);

struct MillsBounds {
  double lower;  // x/(1+x^2)
  double ratio;  // Phi(-x)/phi(x)
  double upper;  // 1/x
};

/// Mill's ratio Phi(-x)/phi(x) together with the classical sandwich bounds
/// (meaningful for x > 0; the ratio itself is defined for every finite x).
MillsBounds mills_ratio_bounds(double x);
double mills_ratio(double x);

}  // namespace selci
