#include "selci/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "selci/detail/roots.hpp"
#include "selci/truncated_normal.hpp"

namespace selci {

namespace {

// Closed intervals; endpoint ties below 1e-8 collapse to a point.
Interval finalize(double lo, double hi) {
  if (hi - lo < 1e-8) {
    const double mid = 0.5 * (lo + hi);
    return {mid, mid};
  }
  return {lo, hi};
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("interval level alpha must be in (0,1)");
  }
}

// log P(Y > y | Y > x) for Y ~ N(theta, sigma^2): the quantity whose
// inversion in theta gives the conditional-quantile interval. Strictly
// increasing in theta from -inf to 0.
double log_upper_tail_ratio(double x, double y, double theta, double sigma) {
  return std_normal_log_sf((y - theta) / sigma) - std_normal_log_sf((x - theta) / sigma);
}

}  // namespace

Interval unadjusted_interval(double y, double sigma, double alpha) {
  require_level(alpha);
  if (!(sigma > 0.0)) throw std::domain_error("unadjusted_interval: sigma must be > 0");
  const double half = sigma * std_normal_quantile(1.0 - 0.5 * alpha);
  return finalize(y - half, y + half);
}

Interval bonferroni_interval(double y, double sigma, double alpha, int p) {
  require_level(alpha);
  if (!(sigma > 0.0) || p < 1) {
    throw std::domain_error("bonferroni_interval: need sigma > 0 and p >= 1");
  }
  const double half = sigma * std_normal_quantile(1.0 - 0.5 * alpha / p);
  return finalize(y - half, y + half);
}

Interval conditional_quantile_interval(const SelectedDatum& d, double sigma,
                                       double alpha) {
  require_level(alpha);
  if (!(sigma > 0.0)) {
    throw std::domain_error("conditional_quantile_interval: sigma must be > 0");
  }
  const double x = d.x_max();
  const double y = d.y;
  if (!(x < y)) {
    throw std::domain_error("conditional_quantile_interval: requires x_max < y");
  }
  auto solve = [&](double log_target) {
    auto f = [&](double th) { return log_upper_tail_ratio(x, y, th, sigma) - log_target; };
    return detail::solve_monotone(f, y - 6.0 * sigma, y + 6.0 * sigma, true, true,
                                  1e-10 * sigma);
  };
  // Lower endpoint: upper tail beyond y is alpha/2; upper endpoint: 1-alpha/2.
  const double lo = solve(std::log(0.5 * alpha));
  const double hi = solve(std::log1p(-0.5 * alpha));
  return finalize(lo, hi);
}

Interval oracle_interval(const SelectiveEngine& engine, double y, double alpha) {
  require_level(alpha);
  const double lo = engine.solve_theta_for_cdf(y, 1.0 - 0.5 * alpha);
  const double hi = engine.solve_theta_for_cdf(y, 0.5 * alpha);
  return finalize(lo, hi);
}

Interval oracle_interval(const SelectiveModel& m, double y, double alpha) {
  SelectiveEngine engine(m, 32768);
  return oracle_interval(engine, y, alpha);
}

Interval adaptive_interval(const SelectedDatum& d, const std::vector<double>& tau,
                           double sigma, double alpha, const EtaEstimator& est) {
  require_level(alpha);
  if (!(d.x_max() < d.y)) {
    throw std::domain_error("adaptive_interval: requires x_max < y");
  }
  if (!is_theta_dependent(est)) {
    const std::vector<double> eta_hat = estimate_eta(est, d, tau, sigma);
    return oracle_interval(SelectiveModel(eta_hat, tau, sigma), d.y, alpha);
  }
  // Profile MLE: the estimate changes with the hypothesized theta0, so the
  // acceptance region {theta0 : l(theta0, eta_hat(theta0)) < y <
  // u(theta0, eta_hat(theta0))} is scanned on a grid and convexified.
  const double y = d.y;
  const double lo_grid = d.x_max() - 10.0 * sigma;
  const double hi_grid = y + 10.0 * sigma;
  const double step = sigma / 50.0;
  double best_margin = -kInf, best_t = y;
  double acc_lo = kInf, acc_hi = -kInf;
  for (double t = lo_grid; t <= hi_grid + 0.5 * step; t += step) {
    const std::vector<double> eta_hat = estimate_eta(est, d, tau, sigma, t);
    SelectiveEngine engine(SelectiveModel(eta_hat, tau, sigma), 32768);
    const auto [l, u] = engine.quantiles(t, alpha);
    const double margin = std::min(y - l, u - y);
    if (margin > best_margin) {
      best_margin = margin;
      best_t = t;
    }
    if (l < y && y < u) {
      acc_lo = std::min(acc_lo, t);
      acc_hi = std::max(acc_hi, t);
    }
  }
  if (acc_lo > acc_hi) {
    // Nothing accepted (can only happen through numerical edge cases):
    // degenerate interval at the least-rejected point.
    return {best_t, best_t};
  }
  return finalize(acc_lo, acc_hi);
}

Interval hybrid_interval(const SelectedDatum& d, const std::vector<double>& tau_unused,
                         double sigma, double alpha, double beta, int p) {
  (void)tau_unused;
  require_level(alpha);
  if (!(beta > 0.0 && beta < alpha)) {
    throw std::domain_error("hybrid_interval: requires 0 < beta < alpha");
  }
  if (!(sigma > 0.0) || p < 1) {
    throw std::domain_error("hybrid_interval: need sigma > 0 and p >= 1");
  }
  const double x = d.x_max();
  const double y = d.y;
  if (!(x < y)) throw std::domain_error("hybrid_interval: requires x_max < y");

  const double k = sigma * std_normal_quantile(1.0 - 0.5 * beta / p);
  const double alpha_adj = (alpha - beta) / (1.0 - beta);

  // CDF at y of N(theta, sigma^2) truncated to (max(x, theta - k), theta + k]:
  // conditioning jointly on the selection event and on theta lying inside the
  // simultaneous band around Y. Strictly decreasing in theta; equals 1 at
  // theta = y - k and 0 at theta = y + k, so both roots lie in y +- k.
  auto trunc_cdf = [&](double theta) {
    const double a = std::max(x, theta - k);
    const double b = theta + k;
    const double za = (a - theta) / sigma;
    const double zb = (b - theta) / sigma;
    const double zy = (y - theta) / sigma;
    // Guard in standardized coordinates: near the window edges rounding can
    // put y strictly between a and b while zy collides with za or zb.
    if (zy <= za) return 0.0;
    if (zy >= zb) return 1.0;
    return std::min(1.0, std::exp(log_normal_mass(za, zy) - log_normal_mass(za, zb)));
  };
  auto solve = [&](double q) {
    auto f = [&](double th) { return trunc_cdf(th) - q; };
    const double flo = f(y - k), fhi = f(y + k);
    return detail::brent(f, y - k, y + k, flo, fhi, 1e-10 * sigma);
  };
  double lo = solve(1.0 - 0.5 * alpha_adj);
  double hi = solve(0.5 * alpha_adj);
  lo = std::max(lo, y - k);
  hi = std::min(hi, y + k);
  return finalize(lo, hi);
}

}  // namespace selci
