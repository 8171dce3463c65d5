#pragma once

// Plug-in estimators of the unselected-group means: profile MLE (maximizes
// the selection-adjusted likelihood of x at a hypothesized theta0),
// conditional MLE (truncated likelihood given the selected value), Bayes
// posterior mode under a Gaussian prior, Gaussian empirical Bayes
// (hierarchical normal-normal with a half-Cauchy-derived scale prior), and
// nonparametric empirical Bayes via predictive recursion.

#include <cstdint>
#include <vector>

#include "selci/selective.hpp"

namespace selci {

class Rng;

struct HyperParams {
  double m = 0.0;  // prior mean
  double v = 1.0;  // prior variance, >= 0
};

struct MixingDensity {
  std::vector<double> grid;     // strictly increasing
  std::vector<double> density;  // nonnegative, trapezoid integral == 1 (1e-6)
};

enum class EtaKind { kProfile, kConditional, kBayes, kGaussianEb, kNpEb, kFixed };

struct EtaEstimator {
  EtaKind kind = EtaKind::kConditional;
  HyperParams prior{0.0, 1.0};    // bayes
  std::vector<double> fixed_eta;  // fixed
  int np_grid = 512;              // np-eb grid size
  int np_perm = 50;               // np-eb permutation count
  std::uint64_t np_seed = 1;      // np-eb permutation stream
};

// True only for the profile MLE, whose estimate depends on the hypothesized
// theta0 and therefore forces grid inversion of the acceptance region.
bool is_theta_dependent(const EtaEstimator& est);

// Apply the estimator to a selected datum. theta0 is only read by the
// profile kind.
std::vector<double> estimate_eta(const EtaEstimator& est, const SelectedDatum& d,
                                 const std::vector<double>& tau, double sigma,
                                 double theta0 = 0.0);

// Maximizer over eta of the selection-adjusted likelihood of x alone at a
// hypothesized selected-group mean theta0 (the selected value is integrated
// out). Converged gradient max-norm < 1e-6.
std::vector<double> profile_mle(const std::vector<double>& x, double theta0,
                                const std::vector<double>& tau, double sigma);

// Coordinatewise maximizer of the upper-truncated-normal likelihood given the
// selected value y. Always >= x componentwise (truncation corrects upward).
std::vector<double> conditional_mle(const std::vector<double>& x, double y,
                                    const std::vector<double>& tau);

// Coordinatewise posterior mode: truncated likelihood times N(m, v) prior.
std::vector<double> bayes_mode(const std::vector<double>& x, double y,
                               const std::vector<double>& tau,
                               const HyperParams& prior);

// MAP fit of the hierarchical model x_j ~ N(m, v + tau_j^2) conditioned on
// all x_j falling below y, with prior pi(v) proportional to (1+v)^-1 v^-1/2.
// Optimized over (m, log v), deterministic start at m = mean(x),
// v = max(var(x) - mean(tau^2), 0.01).
HyperParams gaussian_eb_fit(const std::vector<double>& x, double y,
                            const std::vector<double>& tau);

// Linear shrinkage eta_j = rho_j x_j + (1 - rho_j) m with
// rho_j = v / (v + tau_j^2).
std::vector<double> gaussian_eb_estimate(const std::vector<double>& x,
                                         const HyperParams& h,
                                         const std::vector<double>& tau);

// Stochastic-approximation recursion for the mixing density of the
// unselected means, conditioned on all observations lying below y. Each pass
// processes the observations in a random order; the returned density is the
// average over n_perm passes (densities averaged, then renormalized).
// Requires a common tau for all observations.
MixingDensity predictive_recursion(const std::vector<double>& x, double y,
                                   double tau_scalar, const std::vector<double>& grid,
                                   const std::vector<double>& weights, int n_perm,
                                   Rng& rng);

// Posterior mean of eta_j given x_j under the mixing density, with the
// y-truncated observation kernel; computed in the log domain on the grid.
double npeb_estimate(double x_j, const MixingDensity& gstar, double tau, double y);

// Default recursion grid: n equispaced points on [min x - 4 tau,
// max(y, max x) + 4 tau] (y capped when infinite), and default weights
// w_j = (1 + j)^(-2/3), j = 1..p.
std::vector<double> default_pr_grid(const std::vector<double>& x, double y, double tau,
                                    int n = 512);
std::vector<double> default_pr_weights(int p);

}  // namespace selci
