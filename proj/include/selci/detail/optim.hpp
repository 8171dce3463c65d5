#pragma once

// Small dense BFGS minimizer with Armijo backtracking. Deterministic: no
// randomized restarts, no stochastic line search, so identical inputs give
// bitwise-identical optima. Dimension is small everywhere it is used (2 for
// the Gaussian empirical-Bayes fit, p for the profile likelihood).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace selci::detail {

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimize f(x); `fn(x, grad)` must fill `grad` and return the value.
template <typename Fn>
OptimResult minimize_bfgs(Fn&& fn, std::vector<double> x0, double gtol = 1e-8,
                          int max_iter = 200) {
  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n), g_new(n), p(n), s(n), yv(n), hy(n), x_new(n);
  std::vector<double> H(n * n, 0.0);  // inverse-Hessian approximation
  for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;

  double f = fn(x, g);
  if (std::isnan(f)) throw std::runtime_error("minimize_bfgs: NaN at start");
  OptimResult out;
  out.x = x;
  out.f = f;

  for (int iter = 0; iter < max_iter; ++iter) {
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) gmax = std::max(gmax, std::abs(g[i]));
    if (gmax < gtol) {
      out.converged = true;
      break;
    }

    // p = -H g
    double gp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * g[j];
      p[i] = -acc;
      gp += g[i] * p[i];
    }
    if (!(gp < 0.0)) {
      // Curvature information went bad; reset to steepest descent.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H[i * n + j] = (i == j) ? 1.0 : 0.0;
      gp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = -g[i];
        gp += g[i] * p[i];
      }
      if (gp == 0.0) {
        out.converged = true;
        break;
      }
    }

    // Armijo backtracking.
    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * p[i];
      f_new = fn(x_new, g_new);
      if (!std::isnan(f_new) && f_new <= f + 1e-4 * step * gp) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent at machine-scale steps: stop here

    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      yv[i] = g_new[i] - g[i];
      sy += s[i] * yv[i];
    }
    x = x_new;
    const double f_prev = f;
    f = f_new;
    g = g_new;
    out.x = x;
    out.f = f;
    out.iterations = iter + 1;

    double snorm = 0.0, ynorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      snorm += s[i] * s[i];
      ynorm += yv[i] * yv[i];
    }
    if (sy > 1e-10 * std::sqrt(snorm * ynorm)) {
      // BFGS inverse update: H <- (I - rho s y')H(I - rho y s') + rho s s'
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * yv[j];
        hy[i] = acc;
      }
      double yhy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yhy += yv[i] * hy[i];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          H[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] -
                                 hy[i] * s[j] - s[i] * hy[j]);
        }
      }
    }
    if (std::abs(f_prev - f) < 1e-12 * (std::abs(f) + 1.0)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace selci::detail
