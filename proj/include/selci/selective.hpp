#pragma once

// The conditioned-on-selection probability model for one selected group
// (value y, scale sigma) against p unselected competitors (values x_j, means
// eta_j, scales tau_j), conditioned on the event that the selected value
// exceeds every competitor. Provides the selection probability, the marginal
// law of the selected value, the conditional law of the competitors, quantile
// functions, and an exact inverse-CDF sampler — all carried in the log domain
// so selection probabilities down to 1e-300 stay representable.

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "selci/gauss.hpp"

namespace selci {

class Rng;

struct SelectiveModel {
  std::vector<double> eta;  // means of the unselected groups
  std::vector<double> tau;  // scales of the unselected groups (all > 0)
  double sigma = 1.0;       // scale of the selected group

  SelectiveModel(std::vector<double> eta_, std::vector<double> tau_, double sigma_);
  int p() const { return static_cast<int>(eta.size()); }
};

struct SelectedDatum {
  std::vector<double> x;  // unselected values, all strictly below y
  double y = 0.0;         // selected (winning) value
  double x_max() const;
};

// Tabulated competitor-CDF sums: S(t) = sum_j log Phi((t - eta_j)/tau_j) and
// S'(t), cubic-Hermite interpolated on a uniform grid with exact summation
// outside the covered range. Shared by every integrand evaluation for a fixed
// model, which turns each quadrature node from O(p) into O(1).
class PriorTable {
 public:
  PriorTable(const SelectiveModel& m, double lo, double hi, double step);
  bool covers(double t) const { return t >= lo_ && t <= hi_; }
  double value(double t) const;  // S(t)
  double deriv(double t) const;  // S'(t)

 private:
  double lo_, hi_, step_;
  std::vector<double> s_, sp_;
};

struct SplitMass {
  double log_below;       // log integral over (-inf, cut]
  double log_total;       // log integral over the whole line
  std::size_t nodes_used;
};

class SelectiveEngine {
 public:
  enum class TableMode { kAuto, kNone };

  explicit SelectiveEngine(SelectiveModel model, std::size_t node_budget = 512,
                           TableMode table_mode = TableMode::kAuto);

  const SelectiveModel& model() const { return model_; }
  std::size_t node_budget() const { return node_budget_; }

  // Replace the competitor-sum table with one covering [lo, hi].
  void build_table(double lo, double hi, double step);

  double prior_sum(double t) const;        // S(t)
  double prior_sum_deriv(double t) const;  // S'(t), nonnegative, decreasing

  // Mode and local Gaussian width of the unnormalized selected-value density
  // exp(g), g(t) = log phi((t-theta)/sigma) - log sigma + S(t); g is strictly
  // concave, so the mode is unique.
  double peak(double theta) const;
  double peak_width(double theta) const;

  SplitMass split_mass(double theta, double cut) const;
  double log_sel_prob(double theta) const;
  double marginal_logpdf(double theta, double y) const;
  double marginal_cdf(double theta, double y) const;
  std::pair<double, double> quantiles(double theta, double alpha) const;

  // Solve marginal_cdf(theta, y) = q for theta (the CDF is strictly
  // decreasing in theta); bracket expanded geometrically from y +- 6 sigma.
  double solve_theta_for_cdf(double y, double q) const;

  double log_integrand(double theta, double t) const;

 private:
  std::pair<double, double> integration_range(double theta) const;
  double width_at(double t_peak) const;

  SelectiveModel model_;
  std::size_t node_budget_;
  std::unique_ptr<PriorTable> table_;
  double eta_min_, eta_max_, tau_max_, log_sigma_;
};

// Free-function surface mirroring the engine, for one-shot callers.
double selection_log_prob(const SelectiveModel& m, double theta);
double marginal_selective_logpdf(const SelectiveModel& m, double theta, double y);
double marginal_selective_cdf(const SelectiveModel& m, double theta, double y);
std::pair<double, double> marginal_quantiles(const SelectiveModel& m, double theta,
                                             double alpha);
double conditional_x_logpdf(const SelectiveModel& m, double y,
                            const std::vector<double>& x);
std::vector<SelectedDatum> sample_selective(const SelectiveModel& m, double theta,
                                            int n, Rng& rng);

// Inverse-CDF sampler for the selected-value marginal at fixed theta: the CDF
// is tabulated once (2048 points around the mode) and each draw is a binary
// search plus one truncated-normal quantile per competitor. No rejection
// loop, so rare selection events cost the same as common ones. The engine
// must outlive the sampler.
class MarginalSampler {
 public:
  MarginalSampler(const SelectiveEngine& engine, double theta);
  double draw_y(Rng& rng) const;
  SelectedDatum draw(Rng& rng) const;

 private:
  const SelectiveEngine* engine_;
  double theta_;
  double lo_, step_;
  std::vector<double> cum_;  // normalized CDF at lo_ + i*step_
};

}  // namespace selci
