#include "selci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "selci/detail/optim.hpp"
#include "selci/detail/quadrature.hpp"
#include "selci/detail/roots.hpp"
#include "selci/rng.hpp"

namespace selci {

namespace {

void require_tau(const std::vector<double>& x, const std::vector<double>& tau,
                 const char* who) {
  if (x.size() != tau.size()) {
    throw std::invalid_argument(std::string(who) + ": x and tau sizes differ");
  }
  for (double t : tau) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument(std::string(who) + ": scales must be finite and > 0");
    }
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": observations must be finite");
    }
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Trapezoid weights for an arbitrary strictly increasing grid.
std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (grid[i + 1] - grid[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

// log of the y-truncated observation kernel: density at x of N(t, tau^2)
// conditioned on X < y. y == +inf gives the untruncated kernel.
double log_kernel(double x, double t, double tau, double y) {
  const double z = (x - t) / tau;
  double lk = std_normal_log_pdf(z) - std::log(tau);
  if (std::isfinite(y)) lk -= std_normal_log_cdf((y - t) / tau);
  return lk;
}

}  // namespace

bool is_theta_dependent(const EtaEstimator& est) {
  return est.kind == EtaKind::kProfile;
}

std::vector<double> conditional_mle(const std::vector<double>& x, double y,
                                    const std::vector<double>& tau) {
  require_tau(x, tau, "conditional_mle");
  std::vector<double> eta(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j], tj = tau[j];
    if (!(xj < y)) {
      throw std::invalid_argument("conditional_mle: requires x_j < y");
    }
    // Score of the upper-truncated-normal likelihood in its mean: strictly
    // decreasing, positive at eta = x, with limit (x - y)/tau^2 < 0, so the
    // unique root lies right of x.
    auto score = [&](double eta_j) {
      return (xj - eta_j) / (tj * tj) + std_normal_cdf_ratio((y - eta_j) / tj) / tj;
    };
    eta[j] = detail::solve_monotone(score, xj, xj + tj, false, true, 1e-12 * tj);
  }
  return eta;
}

std::vector<double> bayes_mode(const std::vector<double>& x, double y,
                               const std::vector<double>& tau,
                               const HyperParams& prior) {
  require_tau(x, tau, "bayes_mode");
  if (!(prior.v >= 0.0) || std::isnan(prior.m)) {
    throw std::invalid_argument("bayes_mode: prior needs v >= 0 and finite m");
  }
  if (prior.v == 0.0) return std::vector<double>(x.size(), prior.m);
  std::vector<double> eta(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j], tj = tau[j];
    if (!(xj < y)) throw std::invalid_argument("bayes_mode: requires x_j < y");
    auto score = [&](double eta_j) {
      double s = (xj - eta_j) / (tj * tj) +
                 std_normal_cdf_ratio((y - eta_j) / tj) / tj;
      if (std::isfinite(prior.v)) s += (prior.m - eta_j) / prior.v;
      return s;
    };
    eta[j] = detail::solve_monotone(score, xj - tj, xj + tj, true, true, 1e-12 * tj);
  }
  return eta;
}

HyperParams gaussian_eb_fit(const std::vector<double>& x, double y,
                            const std::vector<double>& tau) {
  require_tau(x, tau, "gaussian_eb_fit");
  const std::size_t p = x.size();
  if (p == 0) throw std::invalid_argument("gaussian_eb_fit: empty sample");
  for (double xj : x) {
    if (!(xj < y)) throw std::invalid_argument("gaussian_eb_fit: requires x_j < y");
  }
  if (p == 1) {
    std::cerr << "gaussian_eb_fit: variance is weakly identified from a single "
                 "observation; the fit is dominated by the scale prior\n";
  }

  const double m0 = mean_of(x);
  double varx = 0.0;
  for (double xj : x) varx += (xj - m0) * (xj - m0);
  varx /= static_cast<double>(p);
  double tau2_mean = 0.0;
  for (double tj : tau) tau2_mean += tj * tj;
  tau2_mean /= static_cast<double>(p);
  const double v0 = std::max(varx - tau2_mean, 0.01);

  // Negative log posterior of (m, u = log v): truncated marginal likelihood
  // of each x_j ~ N(m, v + tau_j^2) given x_j < y, times the scale prior
  // pi(v) dv proportional to v^{-1/2} (1+v)^{-1} dv, in the u parametrization.
  auto objective = [&](const std::vector<double>& mu, std::vector<double>& grad) {
    const double m = mu[0];
    const double u = mu[1];
    const double v = std::exp(u);
    double ll = 0.0, dll_dm = 0.0, dll_dv = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double s2 = v + tau[j] * tau[j];
      const double s = std::sqrt(s2);
      const double z = (x[j] - m) / s;
      ll += std_normal_log_pdf(z) - std::log(s);
      dll_dm += (x[j] - m) / s2;
      dll_dv += ((x[j] - m) * (x[j] - m) - s2) / (2.0 * s2 * s2);
      if (std::isfinite(y)) {
        const double w = (y - m) / s;
        const double h = std_normal_cdf_ratio(w);
        ll -= std_normal_log_cdf(w);
        dll_dm += h / s;
        dll_dv += h * (y - m) / (2.0 * s2 * s);
      }
    }
    const double log1p_eu = (u > 0.0) ? u + std::log1p(std::exp(-u))
                                      : std::log1p(std::exp(u));
    grad[0] = -dll_dm;
    grad[1] = -v * dll_dv - 0.5 + v / (1.0 + v);
    return -ll - 0.5 * u + log1p_eu;
  };

  const auto res = detail::minimize_bfgs(objective, {m0, std::log(v0)}, 1e-8, 500);
  return {res.x[0], std::exp(res.x[1])};
}

std::vector<double> gaussian_eb_estimate(const std::vector<double>& x,
                                         const HyperParams& h,
                                         const std::vector<double>& tau) {
  require_tau(x, tau, "gaussian_eb_estimate");
  if (!(h.v >= 0.0) || std::isnan(h.m)) {
    throw std::invalid_argument("gaussian_eb_estimate: needs v >= 0 and finite m");
  }
  std::vector<double> eta(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double rho = h.v / (h.v + tau[j] * tau[j]);
    eta[j] = rho * x[j] + (1.0 - rho) * h.m;
  }
  return eta;
}

std::vector<double> profile_mle(const std::vector<double>& x, double theta0,
                                const std::vector<double>& tau, double sigma) {
  require_tau(x, tau, "profile_mle");
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(theta0)) {
    throw std::invalid_argument("profile_mle: needs finite theta0, sigma > 0");
  }
  const std::size_t p = x.size();
  if (p == 0) return {};

  const double sig2 = sigma * sigma;

  // Negative of the eta-dependent part of the selection-adjusted joint
  // log-likelihood at fixed theta0:
  //   f(eta) = log c(eta, theta0) + sum_j (x_j - eta_j)^2 / (2 tau_j^2),
  //   df/deta_j = (eta_j - x_j)/tau_j^2 - E[h((T - eta_j)/tau_j)] / tau_j,
  // where c is the selection probability, h = phi/Phi, and the expectation is
  // under the marginal selective law of the selected value T. The log
  // integrand is strictly concave with curvature <= -1/sigma^2, so one
  // composite pass over peak +- 8 sigma evaluates both log c and every E[h_j].
  auto objective = [&](const std::vector<double>& eta, std::vector<double>& grad) {
    // Locate the integrand peak.
    auto slope = [&](double t) {
      double s = -(t - theta0) / sig2;
      for (std::size_t j = 0; j < p; ++j) {
        s += std_normal_cdf_ratio((t - eta[j]) / tau[j]) / tau[j];
      }
      return s;
    };
    double eta_lo = eta[0], eta_hi = eta[0], tau_max = tau[0];
    for (std::size_t j = 1; j < p; ++j) {
      eta_lo = std::min(eta_lo, eta[j]);
      eta_hi = std::max(eta_hi, eta[j]);
      tau_max = std::max(tau_max, tau[j]);
    }
    const double blo = std::min(theta0 - 10.0 * sigma, eta_lo - 10.0 * tau_max);
    const double bhi = std::max(theta0 + 10.0 * sigma, eta_hi + 10.0 * tau_max);
    const double slo = slope(blo), shi = slope(bhi);
    double t_peak;
    if (slo <= 0.0) {
      t_peak = blo;
    } else if (shi >= 0.0) {
      t_peak = bhi;
    } else {
      t_peak = detail::brent(slope, blo, bhi, slo, shi, 1e-10 * sigma);
    }

    // Composite GL16 pass over peak +- 8 sigma: log-integrand values first,
    // then a shifted accumulation of the total mass and each h_j moment.
    constexpr int kPanels = 24;
    constexpr int kNodes = kPanels * 16;
    const double a = t_peak - 8.0 * sigma;
    const double h_panel = 16.0 * sigma / kPanels;
    double ts[kNodes], lg[kNodes], wq[kNodes];
    int n = 0;
    for (int pa = 0; pa < kPanels; ++pa) {
      const double mid = a + (pa + 0.5) * h_panel;
      const double half = 0.5 * h_panel;
      for (int i = 0; i < 8; ++i) {
        ts[n] = mid - half * detail::kGlX16[i];
        wq[n] = half * detail::kGlW16[i];
        ++n;
        ts[n] = mid + half * detail::kGlX16[i];
        wq[n] = half * detail::kGlW16[i];
        ++n;
      }
    }
    double gmax = -kInf;
    for (int i = 0; i < kNodes; ++i) {
      double g = std_normal_log_pdf((ts[i] - theta0) / sigma) - std::log(sigma);
      for (std::size_t j = 0; j < p; ++j) {
        g += std_normal_log_cdf((ts[i] - eta[j]) / tau[j]);
      }
      lg[i] = g;
      gmax = std::max(gmax, g);
    }
    double total = 0.0;
    std::vector<double> moment(p, 0.0);
    for (int i = 0; i < kNodes; ++i) {
      const double wdens = wq[i] * std::exp(lg[i] - gmax);
      if (wdens == 0.0) continue;
      total += wdens;
      for (std::size_t j = 0; j < p; ++j) {
        moment[j] += wdens * std_normal_cdf_ratio((ts[i] - eta[j]) / tau[j]);
      }
    }
    const double log_c = gmax + std::log(total);

    double value = log_c;
    for (std::size_t j = 0; j < p; ++j) {
      const double tj2 = tau[j] * tau[j];
      value += (x[j] - eta[j]) * (x[j] - eta[j]) / (2.0 * tj2);
      grad[j] = (eta[j] - x[j]) / tj2 - (moment[j] / total) / tau[j];
    }
    return value;
  };

  const auto res = detail::minimize_bfgs(objective, x, 1e-6, 300);
  return res.x;
}

std::vector<double> default_pr_grid(const std::vector<double>& x, double y, double tau,
                                    int n) {
  if (x.empty()) throw std::invalid_argument("default_pr_grid: empty sample");
  if (!(tau > 0.0) || n < 2) {
    throw std::invalid_argument("default_pr_grid: needs tau > 0 and n >= 2");
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *xmin_it - 4.0 * tau;
  const double top = std::isfinite(y) ? std::max(y, *xmax_it) : *xmax_it;
  const double hi = top + 4.0 * tau;
  std::vector<double> grid(n);
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = lo + i * step;
  return grid;
}

std::vector<double> default_pr_weights(int p) {
  std::vector<double> w(std::max(p, 0));
  for (int j = 1; j <= p; ++j) {
    w[j - 1] = std::pow(1.0 + j, -2.0 / 3.0);
  }
  return w;
}

MixingDensity predictive_recursion(const std::vector<double>& x, double y,
                                   double tau_scalar, const std::vector<double>& grid,
                                   const std::vector<double>& weights, int n_perm,
                                   Rng& rng) {
  const std::size_t p = x.size();
  if (!(tau_scalar > 0.0)) {
    throw std::invalid_argument("predictive_recursion: requires tau > 0");
  }
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw std::invalid_argument("predictive_recursion: grid must be strictly increasing");
  }
  if (weights.size() < p) {
    throw std::invalid_argument("predictive_recursion: fewer weights than observations");
  }
  if (n_perm < 1) throw std::invalid_argument("predictive_recursion: n_perm must be >= 1");
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("predictive_recursion: weights must lie in [0,1]");
    }
  }

  const std::size_t n = grid.size();
  const std::vector<double> trapw = trapezoid_weights(grid);
  const double range = grid.back() - grid.front();

  MixingDensity out;
  out.grid = grid;
  out.density.assign(n, 1.0 / range);
  if (p == 0) return out;

  // Observation kernels evaluated once per (observation, grid point).
  std::vector<double> K(p * n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      K[j * n + i] = std::exp(log_kernel(x[j], grid[i], tau_scalar, y));
    }
  }

  std::vector<double> avg(n, 0.0), g(n);
  for (int perm_i = 0; perm_i < n_perm; ++perm_i) {
    std::fill(g.begin(), g.end(), 1.0 / range);
    const std::vector<std::size_t> order = random_permutation(p, rng);
    for (std::size_t k = 0; k < p; ++k) {
      const double* kj = &K[order[k] * n];
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += trapw[i] * kj[i] * g[i];
      if (!(m > 0.0) || !std::isfinite(m)) continue;  // kernel off-grid: skip
      const double w = weights[k];
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = (1.0 - w) * g[i] + w * kj[i] * g[i] / m;
      }
    }
    for (std::size_t i = 0; i < n; ++i) avg[i] += g[i];
  }

  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += trapw[i] * avg[i];
  for (std::size_t i = 0; i < n; ++i) avg[i] /= mass;
  out.density = std::move(avg);

  const double edge_mass =
      trapw.front() * out.density.front() + trapw.back() * out.density.back();
  if (edge_mass > 1e-3) {
    std::cerr << "predictive_recursion: " << edge_mass
              << " of the fitted mixing mass sits on the grid boundary; "
                 "consider widening the grid\n";
  }
  return out;
}

double npeb_estimate(double x_j, const MixingDensity& gstar, double tau, double y) {
  if (gstar.grid.size() != gstar.density.size() || gstar.grid.size() < 2) {
    throw std::invalid_argument("npeb_estimate: malformed mixing density");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("npeb_estimate: requires tau > 0");
  const std::size_t n = gstar.grid.size();
  const std::vector<double> trapw = trapezoid_weights(gstar.grid);
  std::vector<double> li(n, -kInf);
  double m = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = gstar.density[i] * trapw[i];
    if (gi <= 0.0) continue;
    li[i] = log_kernel(x_j, gstar.grid[i], tau, y) + std::log(gi);
    m = std::max(m, li[i]);
  }
  if (m == -kInf) return x_j;  // posterior underflowed everywhere
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (li[i] == -kInf) continue;
    const double e = std::exp(li[i] - m);
    num += gstar.grid[i] * e;
    den += e;
  }
  return num / den;
}

std::vector<double> estimate_eta(const EtaEstimator& est, const SelectedDatum& d,
                                 const std::vector<double>& tau, double sigma,
                                 double theta0) {
  switch (est.kind) {
    case EtaKind::kFixed:
      if (est.fixed_eta.size() != d.x.size()) {
        throw std::invalid_argument("estimate_eta: fixed_eta size mismatch");
      }
      return est.fixed_eta;
    case EtaKind::kProfile:
      return profile_mle(d.x, theta0, tau, sigma);
    case EtaKind::kConditional:
      return conditional_mle(d.x, d.y, tau);
    case EtaKind::kBayes:
      return bayes_mode(d.x, d.y, tau, est.prior);
    case EtaKind::kGaussianEb: {
      const HyperParams h = gaussian_eb_fit(d.x, d.y, tau);
      return gaussian_eb_estimate(d.x, h, tau);
    }
    case EtaKind::kNpEb: {
      require_tau(d.x, tau, "estimate_eta");
      if (d.x.empty()) return {};
      const double t0 = tau.front();
      for (double tj : tau) {
        if (tj != t0) {
          throw std::invalid_argument(
              "estimate_eta: the nonparametric estimator requires a common scale");
        }
      }
      const std::vector<double> grid = default_pr_grid(d.x, d.y, t0, est.np_grid);
      const std::vector<double> weights =
          default_pr_weights(static_cast<int>(d.x.size()));
      Rng rng(est.np_seed);
      const MixingDensity gstar =
          predictive_recursion(d.x, d.y, t0, grid, weights, est.np_perm, rng);
      std::vector<double> eta(d.x.size());
      for (std::size_t j = 0; j < d.x.size(); ++j) {
        eta[j] = npeb_estimate(d.x[j], gstar, t0, d.y);
      }
      return eta;
    }
  }
  throw std::logic_error("estimate_eta: unknown estimator kind");
}

}  // namespace selci
