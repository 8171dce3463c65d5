#pragma once

// Monte Carlo experiment engine: selective coverage and width experiments
// over a theta grid, marginal (over selection events) coverage experiments,
// power curves, and estimator percentile bands. Replications are seeded by
// (master seed, cell index, replication index) so results are byte-identical
// regardless of how work is scheduled across threads.

#include <cstdint>
#include <string>
#include <vector>

#include "selci/estimators.hpp"
#include "selci/procedures.hpp"

namespace selci {

struct EtaSpec {
  enum class Kind { kGaussianQuantiles, kMixtureQuantiles, kExplicit };
  Kind kind = Kind::kGaussianQuantiles;
  double s0 = 1.0;                             // gaussian-quantiles scale
  std::vector<double> weights, means, scales;  // mixture-quantiles
  std::vector<double> values;                  // explicit
};

// eta_j = G^{-1}((j - 0.5)/p) for the design's distribution G, or the explicit
// vector (which must have length p).
std::vector<double> resolve_eta(const EtaSpec& spec, int p);

struct Scenario {
  std::string id = "scenario";
  int p = 1;
  double sigma = 1.0;
  std::vector<double> tau;  // length p
  EtaSpec eta_spec;
  std::vector<double> theta_values;
  double alpha = 0.05;
  int n_rep = 1000;
  std::uint64_t seed = 1;
};

struct ProcedureSpec {
  enum class Kind {
    kUnadjusted,
    kBonferroni,
    kConditionalQuantile,
    kHybrid,
    kOracle,
    kAdaptive
  };
  std::string name;  // label used in result tables
  Kind kind = Kind::kUnadjusted;
  EtaEstimator estimator;    // kAdaptive only
  double beta_factor = 0.1;  // kHybrid: beta = beta_factor * alpha
};

// Construct the standard specs by name: unadjusted, bonferroni,
// conditional-quantile, hybrid, oracle, profile, conditional, bayes,
// gaussian-eb, np-eb. Throws on unknown names.
ProcedureSpec procedure_by_name(const std::string& name);

struct CellResult {
  std::string scenario_id;
  std::string procedure;
  double theta = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
  double mean_width = 0.0;
  double width_q50 = 0.0;
  double width_q90 = 0.0;
  int n_ok = 0;
  int n_err = 0;
  double selection_logprob = 0.0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
};

// For each theta in the scenario grid: draw n_rep selective data sets, apply
// every procedure, and record coverage of the true theta and interval width.
// Replication errors are excluded from the averages and counted; a cell with
// more than 1% errors aborts the experiment.
ExperimentResult coverage_width_experiment(const std::vector<ProcedureSpec>& procedures,
                                           const Scenario& scenario, int n_threads = 1);

struct MarginalResult {
  std::vector<CellResult> cells;            // theta reported as NaN
  std::vector<double> selection_frequency;  // how often each group won
};

// Unconditional experiment: draw all p+1 outcomes, select the argmax, build
// the interval for the selected group's true mean, and average coverage over
// selection events.
MarginalResult marginal_coverage_experiment(const std::vector<ProcedureSpec>& procedures,
                                            const std::vector<double>& means,
                                            const std::vector<double>& scales,
                                            double alpha, int n_rep,
                                            std::uint64_t seed, int n_threads = 1);

struct PowerCurve {
  std::vector<double> t;
  std::vector<double> reject;  // rejection probability of H: theta = t
  std::vector<double> se;
  int n_err = 0;
};

// Rejection frequency of the procedure-induced test of theta = t, for data
// drawn selectively at theta_true.
PowerCurve power_curve(const ProcedureSpec& test, const Scenario& scenario,
                       double theta_true, const std::vector<double>& t_grid,
                       int n_threads = 1);

struct PercentileCurves {
  std::vector<double> theta;
  std::vector<double> q25, q50, q75;  // percentiles of the first component
  int n_err = 0;
};

// Quartile curves of the estimator's first component. Data are drawn
// selectively at the scenario's first theta value; the grid supplies the
// hypothesized theta handed to theta-dependent estimators (theta-independent
// estimators trace flat bands).
PercentileCurves estimator_percentiles(const EtaEstimator& estimator,
                                       const Scenario& scenario,
                                       const std::vector<double>& theta_grid,
                                       int n_threads = 1);

// 0 (or negative) resolves to the hardware concurrency.
int resolve_threads(int requested);

}  // namespace selci
