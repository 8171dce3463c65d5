#include "selci/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "selci/rng.hpp"

namespace selci {

namespace {

// 8-point Gauss-Legendre rule on [-1,1] (nodes symmetric about zero).
constexpr double kGl8X[4] = {0.18343464249564980, 0.52553240991632899,
                             0.79666647741362674, 0.96028985649753623};
constexpr double kGl8W[4] = {0.36268378337836198, 0.31370664587788729,
                             0.22238103445337447, 0.10122853629037626};

// log(1 - exp(u)) for u < 0, switching forms to preserve precision.
double log1mexp(double u) {
  if (u >= 0.0) return -kInf;  // mass difference rounded to zero
  return (u > -0.6931471805599453) ? std::log(-std::expm1(u)) : std::log1p(-std::exp(u));
}

// log integral of the standard normal density over a narrow window (width
// <= ~0.5) via a single GL8 panel, carried out relative to the largest
// exponent so far-tail windows don't underflow.
double log_mass_narrow(double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double le[8];
  for (int i = 0; i < 4; ++i) {
    double t1 = mid - half * kGl8X[i];
    double t2 = mid + half * kGl8X[i];
    le[2 * i] = -0.5 * t1 * t1;
    le[2 * i + 1] = -0.5 * t2 * t2;
  }
  double m = le[0];
  for (int i = 1; i < 8; ++i) m = std::max(m, le[i]);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    s += kGl8W[i] * (std::exp(le[2 * i] - m) + std::exp(le[2 * i + 1] - m));
  }
  return m + std::log(s * half) - kLogSqrt2Pi;
}

}  // namespace

TruncatedNormal::TruncatedNormal(double mu_, double scale_, double lower_, double upper_)
    : mu(mu_), scale(scale_), lower(lower_), upper(upper_) {
  if (std::isnan(mu) || std::isnan(scale) || std::isnan(lower) || std::isnan(upper)) {
    throw std::domain_error("TruncatedNormal: NaN parameter");
  }
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(mu)) {
    throw std::domain_error("TruncatedNormal: scale must be finite and > 0, mu finite");
  }
  if (!(lower < upper)) {
    throw std::domain_error("TruncatedNormal: requires lower < upper");
  }
}

double log_normal_mass(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) throw std::domain_error("log_normal_mass: NaN bound");
  if (!(a < b)) throw std::domain_error("log_normal_mass: requires a < b");
  if (a == -kInf && b == kInf) return 0.0;
  if (a == -kInf) return std_normal_log_cdf(b);
  if (b == kInf) return std_normal_log_sf(a);
  if (b <= 0.0) return log_normal_mass(-b, -a);  // mirror into the right tail
  if (a >= 0.0) {
    double la = std_normal_log_sf(a);
    double lb = std_normal_log_sf(b);
    return la + log1mexp(lb - la);
  }
  // a < 0 < b: the window straddles the mode.
  if (b - a < 0.5) return log_mass_narrow(a, b);
  return std::log(std_normal_cdf(b) - std_normal_cdf(a));
}

double trunc_normal_cdf(const TruncatedNormal& t, double y) {
  if (std::isnan(y)) throw std::domain_error("trunc_normal_cdf: NaN argument");
  const double a = (t.lower - t.mu) / t.scale;
  const double b = (t.upper - t.mu) / t.scale;
  const double z = (y - t.mu) / t.scale;
  if (z <= a) return 0.0;
  if (z >= b) return 1.0;
  double f = std::exp(log_normal_mass(a, z) - log_normal_mass(a, b));
  return std::min(f, 1.0);
}

double trunc_normal_quantile(const TruncatedNormal& t, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("trunc_normal_quantile: u must be in (0,1)");
  }
  const double a = (t.lower - t.mu) / t.scale;
  const double b = (t.upper - t.mu) / t.scale;
  double z;
  if (b <= 0.0) {
    // Mirror into the right tail; 1-u conversions stay inside the formula.
    double la = std_normal_log_sf(-b);
    double lb = (a == -kInf) ? -kInf : std_normal_log_sf(-a);
    double target = la + std::log1p(-(1.0 - u) * -std::expm1(std::min(lb - la, 0.0)));
    z = -std_normal_isf_from_log(target);
  } else if (a >= 0.0) {
    double la = std_normal_log_sf(a);
    double lb = (b == kInf) ? -kInf : std_normal_log_sf(b);
    double target = la + std::log1p(-u * -std::expm1(std::min(lb - la, 0.0)));
    z = std_normal_isf_from_log(target);
  } else if (std::isfinite(a) && std::isfinite(b) && b - a < 0.5) {
    // Narrow straddling window: invert the GL8 mass numerically.
    const double log_total = log_mass_narrow(a, b);
    z = a + u * (b - a);
    for (int i = 0; i < 50; ++i) {
      double g = std::exp(log_normal_mass(a, std::max(z, std::nextafter(a, b))) - log_total) - u;
      double step = -g * std::exp(log_total - std_normal_log_pdf(z));
      double zn = z + step;
      if (!(zn > a && zn < b)) zn = 0.5 * ((g > 0 ? a : b) + z);
      if (std::abs(zn - z) < 1e-15 * (std::abs(z) + 1.0)) {
        z = zn;
        break;
      }
      z = zn;
    }
  } else {
    // Wide straddling window: plain probability arithmetic is well scaled.
    double pa = std_normal_cdf(a);
    double pb = std_normal_cdf(b);
    z = std_normal_quantile(pa + u * (pb - pa));
  }
  z = std::min(std::max(z, a), b);
  return t.mu + t.scale * z;
}

double trunc_normal_log_pdf(const TruncatedNormal& t, double y) {
  if (std::isnan(y)) throw std::domain_error("trunc_normal_log_pdf: NaN argument");
  if (y <= t.lower || y >= t.upper) return -kInf;
  const double a = (t.lower - t.mu) / t.scale;
  const double b = (t.upper - t.mu) / t.scale;
  const double z = (y - t.mu) / t.scale;
  return std_normal_log_pdf(z) - std::log(t.scale) - log_normal_mass(a, b);
}

double trunc_normal_sample(const TruncatedNormal& t, Rng& rng) {
  return trunc_normal_quantile(t, rng.uniform01());
}

}  // namespace selci
