#pragma once

// The six confidence-interval constructors for the mean of the selected
// (largest) group: unadjusted, Bonferroni-adjusted, conditional-quantile
// (conditions on the runner-up value), oracle (knows the unselected means),
// adaptive (plugs an estimate of those means into the oracle), and the
// hybrid (conditional inference restricted to a relaxed simultaneous band).

#include <vector>

#include "selci/estimators.hpp"
#include "selci/selective.hpp"

namespace selci {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
  bool contains(double t) const { return lower <= t && t <= upper; }
};

Interval unadjusted_interval(double y, double sigma, double alpha);

// y +- sigma * quantile(1 - alpha/(2p)); p is the number of unselected
// competitors.
Interval bonferroni_interval(double y, double sigma, double alpha, int p);

// Equal-tailed inversion of the family N(theta, sigma^2) truncated to
// (x_max, inf), evaluated at the observed y. Uses only x_max from the datum.
Interval conditional_quantile_interval(const SelectedDatum& d, double sigma,
                                       double alpha);

// Equal-tailed inversion of the selected-value marginal CDF; requires the
// true unselected means (via the model). The engine overload reuses a
// prebuilt engine (and its table) across calls.
Interval oracle_interval(const SelectiveModel& m, double y, double alpha);
Interval oracle_interval(const SelectiveEngine& engine, double y, double alpha);

// Oracle with estimated means plugged in. For theta0-independent estimators
// this is exactly oracle_interval at the estimate; the profile MLE
// (theta0-dependent) is inverted over a theta0 grid spanning
// [x_max - 10 sigma, y + 10 sigma] with step sigma/50, returning the convex
// hull of accepted points.
Interval adaptive_interval(const SelectedDatum& d, const std::vector<double>& tau,
                           double sigma, double alpha, const EtaEstimator& est);

// Conditional-quantile-style interval at adjusted level
// (alpha - beta)/(1 - beta), built from N(theta, sigma^2) truncated to
// (x_max, inf) intersected with the acceptance window of the simultaneous
// band theta +- k sigma, k = quantile(1 - beta/(2p)). The result always lies
// within y +- k sigma. tau_unused is accepted for signature uniformity with
// the other datum-based constructors.
Interval hybrid_interval(const SelectedDatum& d, const std::vector<double>& tau_unused,
                         double sigma, double alpha, double beta, int p);

}  // namespace selci
