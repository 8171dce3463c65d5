#pragma once

// Truncated normal distribution (one- or two-sided) with log-domain tail
// handling. The CDF/quantile/sampling path stays accurate even when the
// untruncated probability of the window is below 1e-300, which is exactly
// the regime rare-selection conditioning puts us in. Sampling is by inverse
// CDF — never rejection — so a draw costs the same no matter how improbable
// the window is.

#include "selci/gauss.hpp"

namespace selci {

class Rng;

struct TruncatedNormal {
  double mu;
  double scale;
  double lower;  // may be -inf
  double upper;  // may be +inf

  TruncatedNormal(double mu_, double scale_, double lower_, double upper_);
};

/// log P(a < Z < b) for standard normal Z, with -inf <= a < b <= +inf.
/// Accurate for far-tail windows and for windows of width down to ~1e-300.
double log_normal_mass(double a, double b);

double trunc_normal_cdf(const TruncatedNormal& t, double y);

/// Inverse CDF; u must lie in (0,1). Exact inverse of trunc_normal_cdf to
/// ~1e-12 in probability.
double trunc_normal_quantile(const TruncatedNormal& t, double u);

/// Log density; -inf outside the support.
double trunc_normal_log_pdf(const TruncatedNormal& t, double y);

double trunc_normal_sample(const TruncatedNormal& t, Rng& rng);

}  // namespace selci
