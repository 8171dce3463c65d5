#include "selci/gauss.hpp"

#include <stdexcept>
#include <string>

namespace selci {

namespace {

void require_not_nan(double z, const char* who) {
  if (std::isnan(z)) {
    throw std::domain_error(std::string(who) + ": NaN input");
  }
}

// Mill's ratio (1-Phi(z))/phi(z) via the Laplace continued fraction
//   R(z) = 1/(z + 1/(z + 2/(z + 3/(...)))),
// evaluated by backward recurrence. Excellent for z >= ~10; used past the
// range where erfc can represent the survival probability at all.
double mills_cf(double z) {
  double r = 0.0;
  for (int k = 64; k >= 1; --k) {
    r = static_cast<double>(k) / (z + r);
  }
  return 1.0 / (z + r);
}

// Peter Acklam's rational approximation to the normal quantile (relative
// error < 1.15e-9 over the full open unit interval); we refine it below.
double quantile_seed(double u) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (u < plow) {
    double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log1p(-u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = u - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_pdf(double z) {
  require_not_nan(z, "std_normal_pdf");
  return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

double std_normal_log_pdf(double z) {
  require_not_nan(z, "std_normal_log_pdf");
  return -0.5 * z * z - kLogSqrt2Pi;
}

double std_normal_cdf(double z) {
  require_not_nan(z, "std_normal_cdf");
  return 0.5 * std::erfc(-z / kSqrt2);
}

double std_normal_sf(double z) {
  require_not_nan(z, "std_normal_sf");
  return 0.5 * std::erfc(z / kSqrt2);
}

double std_normal_log_sf(double z) {
  require_not_nan(z, "std_normal_log_sf");
  if (z < 0.0) {
    // Survival close to 1: keep the tiny complement exactly.
    return std::log1p(-std_normal_cdf(z));
  }
  if (z > 36.0) {
    // erfc underflows around z ~ 37.5; switch to pdf * Mill's ratio.
    return std_normal_log_pdf(z) + std::log(mills_cf(z));
  }
  return std::log(0.5 * std::erfc(z / kSqrt2));
}

double std_normal_log_cdf(double z) { return std_normal_log_sf(-z); }

double std_normal_cdf_ratio(double z) {
  require_not_nan(z, "std_normal_cdf_ratio");
  if (z < -36.0) {
    // Phi(z) = phi(z) * R(-z), so phi/Phi = 1/R(-z); no cancellation.
    return 1.0 / mills_cf(-z);
  }
  return std::exp(std_normal_log_pdf(z) - std_normal_log_cdf(z));
}

double std_normal_quantile(double u) {
  require_not_nan(u, "std_normal_quantile");
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("std_normal_quantile: u must be in (0,1)");
  }
  double z = quantile_seed(u);
  // Two Newton corrections in the log domain of the nearer tail; this keeps
  // full precision even for u within a few ulps of 0 or 1.
  if (u < 0.5) {
    const double lu = std::log(u);
    for (int i = 0; i < 2; ++i) {
      double lc = std_normal_log_cdf(z);
      z -= (lc - lu) * std::exp(lc - std_normal_log_pdf(z));
    }
  } else {
    const double ls_target = std::log1p(-u);
    for (int i = 0; i < 2; ++i) {
      double ls = std_normal_log_sf(z);
      z += (ls - ls_target) * std::exp(ls - std_normal_log_pdf(z));
    }
  }
  return z;
}

double std_normal_isf_from_log(double log_p) {
  require_not_nan(log_p, "std_normal_isf_from_log");
  if (log_p > 0.0) {
    throw std::domain_error("std_normal_isf_from_log: log probability > 0");
  }
  if (log_p == 0.0) return -kInf;
  if (log_p == -kInf) return kInf;

  double z;
  if (log_p < -700.0) {
    // Start from the asymptotic inversion of -log sf ~ z^2/2 + log(z) + c.
    double t = -2.0 * (log_p + kLogSqrt2Pi);
    z = std::sqrt(std::max(t - std::log(std::max(t, 2.0)), 2.0));
  } else {
    z = -std_normal_quantile(std::exp(log_p));  // sf(z)=u <=> z=-Phi^{-1}(u)
  }
  for (int i = 0; i < 4; ++i) {
    double ls = std_normal_log_sf(z);
    double step = (ls - log_p) * std::exp(ls - std_normal_log_pdf(z));
    if (!std::isfinite(step)) break;
    z += step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
  }
  return z;
}

double chi2_3_cdf(double x) {
  require_not_nan(x, "chi2_3_cdf");
  if (x < 0.0) throw std::domain_error("chi2_3_cdf: negative argument");
  if (x == kInf) return 1.0;
  double s = std::sqrt(x);
  double v = 2.0 * std_normal_cdf(s) - 1.0 - s * std::exp(-0.5 * x) / std::sqrt(std::atan(1.0) * 2.0);
  if (v < 0.0) v = 0.0;  // guard rounding near x = 0
  if (v > 1.0) v = 1.0;
  return v;
}

double mills_ratio(double x) {
  require_not_nan(x, "mills_ratio");
  if (x > 36.0) return mills_cf(x);
  return std::exp(std_normal_log_sf(x) - std_normal_log_pdf(x));
}

MillsBounds mills_ratio_bounds(double x) {
  return MillsBounds{x / (1.0 + x * x), mills_ratio(x), x > 0.0 ? 1.0 / x : kInf};
}

}  // namespace selci
