#include "selci/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "selci/detail/roots.hpp"
#include "selci/rng.hpp"

namespace selci {

namespace {

void validate_scenario(const Scenario& sc) {
  if (sc.p < 1) throw std::invalid_argument("scenario: p must be >= 1");
  if (!(sc.sigma > 0.0) || !std::isfinite(sc.sigma)) {
    throw std::invalid_argument("scenario: sigma must be finite and > 0");
  }
  if (static_cast<int>(sc.tau.size()) != sc.p) {
    throw std::invalid_argument("scenario: tau must have length p");
  }
  for (double t : sc.tau) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("scenario: scales must be finite and > 0");
    }
  }
  if (sc.theta_values.empty()) {
    throw std::invalid_argument("scenario: theta grid must be non-empty");
  }
  for (double t : sc.theta_values) {
    if (!std::isfinite(t)) throw std::invalid_argument("scenario: theta must be finite");
  }
  if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) {
    throw std::invalid_argument("scenario: alpha must lie in (0,1)");
  }
  if (sc.n_rep < 1) throw std::invalid_argument("scenario: n_rep must be >= 1");
}

// Run fn(first_rep, last_rep) over a static partition of [0, n_rep) and
// propagate the first worker exception. Writes must target disjoint
// preallocated slots so results do not depend on the partition.
template <typename Fn>
void parallel_reps(int n_rep, int n_threads, Fn&& fn) {
  const int workers = std::max(1, std::min(n_threads, n_rep));
  if (workers == 1) {
    fn(0, n_rep);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::string> failures(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(n_rep) * w / workers);
    const int hi = static_cast<int>(static_cast<long long>(n_rep) * (w + 1) / workers);
    pool.emplace_back([&, w, lo, hi]() {
      try {
        fn(lo, hi);
      } catch (const std::exception& e) {
        failures[w] = e.what();
      } catch (...) {
        failures[w] = "unknown error";
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::string& f : failures) {
    if (!f.empty()) throw std::runtime_error(f);
  }
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const auto idx = static_cast<std::size_t>(
      std::llround(q * static_cast<double>(sorted.size() - 1)));
  return sorted[std::min(idx, sorted.size() - 1)];
}

// Shared per-replication slot arrays for one experiment cell.
struct CellSlots {
  std::vector<std::uint8_t> covered;  // [proc][rep]
  std::vector<std::uint8_t> errored;
  std::vector<double> width;
  int n_proc = 0, n_rep = 0;

  CellSlots(int procs, int reps)
      : covered(static_cast<std::size_t>(procs) * reps, 0),
        errored(static_cast<std::size_t>(procs) * reps, 0),
        width(static_cast<std::size_t>(procs) * reps, kNaN),
        n_proc(procs),
        n_rep(reps) {}

  std::size_t at(int proc, int rep) const {
    return static_cast<std::size_t>(proc) * n_rep + rep;
  }
};

CellResult reduce_cell(const CellSlots& slots, int proc, const std::string& scenario_id,
                       const std::string& proc_name, double theta,
                       double selection_logprob) {
  CellResult out;
  out.scenario_id = scenario_id;
  out.procedure = proc_name;
  out.theta = theta;
  out.selection_logprob = selection_logprob;
  std::vector<double> widths;
  widths.reserve(static_cast<std::size_t>(slots.n_rep));
  long long hits = 0;
  for (int r = 0; r < slots.n_rep; ++r) {
    const std::size_t i = slots.at(proc, r);
    if (slots.errored[i]) {
      ++out.n_err;
      continue;
    }
    ++out.n_ok;
    hits += slots.covered[i];
    widths.push_back(slots.width[i]);
  }
  if (out.n_ok > 0) {
    out.coverage = static_cast<double>(hits) / out.n_ok;
    out.coverage_se = std::sqrt(
        std::max(out.coverage * (1.0 - out.coverage), 0.0) / out.n_ok);
    std::sort(widths.begin(), widths.end());
    out.mean_width = std::accumulate(widths.begin(), widths.end(), 0.0) / out.n_ok;
    out.width_q50 = sorted_quantile(widths, 0.5);
    out.width_q90 = sorted_quantile(widths, 0.9);
  } else {
    out.coverage = kNaN;
    out.coverage_se = kNaN;
    out.mean_width = kNaN;
    out.width_q50 = kNaN;
    out.width_q90 = kNaN;
  }
  return out;
}

void enforce_error_budget(const CellResult& cell) {
  const int n_total = cell.n_ok + cell.n_err;
  if (cell.n_err * 100 > n_total) {
    throw std::runtime_error("experiment cell '" + cell.scenario_id + "' / '" +
                             cell.procedure + "' at theta=" + std::to_string(cell.theta) +
                             ": " + std::to_string(cell.n_err) + " of " +
                             std::to_string(n_total) +
                             " replications errored (> 1% budget)");
  }
}

// Interval construction for one replication under one procedure spec. The
// cell's true-model engine serves the oracle (callers without one pass null
// and handle the oracle themselves); adaptive procedures build a
// per-replication engine around the plugged-in means, with the competitor-sum
// table restricted to the range the quantile inversion actually visits.
Interval apply_procedure(const ProcedureSpec& spec, const SelectedDatum& d,
                         const std::vector<double>& tau, double sigma, double alpha,
                         const SelectiveEngine* true_engine, Rng& rep_rng) {
  switch (spec.kind) {
    case ProcedureSpec::Kind::kUnadjusted:
      return unadjusted_interval(d.y, sigma, alpha);
    case ProcedureSpec::Kind::kBonferroni:
      return bonferroni_interval(d.y, sigma, alpha, static_cast<int>(tau.size()));
    case ProcedureSpec::Kind::kConditionalQuantile:
      return conditional_quantile_interval(d, sigma, alpha);
    case ProcedureSpec::Kind::kHybrid:
      return hybrid_interval(d, tau, sigma, alpha, spec.beta_factor * alpha,
                             static_cast<int>(tau.size()));
    case ProcedureSpec::Kind::kOracle:
      if (true_engine == nullptr) {
        throw std::logic_error("apply_procedure: oracle needs the true-model engine");
      }
      return oracle_interval(*true_engine, d.y, alpha);
    case ProcedureSpec::Kind::kAdaptive: {
      EtaEstimator est = spec.estimator;
      if (est.kind == EtaKind::kNpEb) est.np_seed = rep_rng.next_u64();
      if (is_theta_dependent(est)) {
        return adaptive_interval(d, tau, sigma, alpha, est);
      }
      const std::vector<double> eta_hat = estimate_eta(est, d, tau, sigma);
      SelectiveModel plug(eta_hat, tau, sigma);
      SelectiveEngine engine(std::move(plug), 32768, SelectiveEngine::TableMode::kNone);
      if (eta_hat.size() >= 8) {
        const auto [emin, emax] = std::minmax_element(eta_hat.begin(), eta_hat.end());
        const double tau_max = *std::max_element(tau.begin(), tau.end());
        const double tau_min = *std::min_element(tau.begin(), tau.end());
        engine.build_table(*emin - 10.0 * tau_max,
                           std::max(d.y, *emax) + 10.0 * sigma,
                           0.02 * std::min(tau_min, sigma));
      }
      return oracle_interval(engine, d.y, alpha);
    }
  }
  throw std::logic_error("apply_procedure: unknown procedure kind");
}

}  // namespace

std::vector<double> resolve_eta(const EtaSpec& spec, int p) {
  if (p < 1) throw std::domain_error("resolve_eta: p must be >= 1");
  std::vector<double> eta(static_cast<std::size_t>(p));
  switch (spec.kind) {
    case EtaSpec::Kind::kGaussianQuantiles: {
      if (!std::isfinite(spec.s0)) {
        throw std::domain_error("resolve_eta: s0 must be finite");
      }
      for (int j = 1; j <= p; ++j) {
        eta[j - 1] = spec.s0 * std_normal_quantile((j - 0.5) / p);
      }
      return eta;
    }
    case EtaSpec::Kind::kMixtureQuantiles: {
      const std::size_t k = spec.weights.size();
      if (k == 0 || spec.means.size() != k || spec.scales.size() != k) {
        throw std::domain_error(
            "resolve_eta: mixture weights/means/scales must have equal nonzero length");
      }
      double wsum = 0.0;
      for (double w : spec.weights) {
        if (!(w > 0.0)) throw std::domain_error("resolve_eta: weights must be > 0");
        wsum += w;
      }
      if (std::abs(wsum - 1.0) > 1e-6) {
        throw std::domain_error("resolve_eta: mixture weights must sum to 1");
      }
      double lo = kInf, hi = -kInf, smax = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(spec.scales[i] > 0.0)) {
          throw std::domain_error("resolve_eta: mixture scales must be > 0");
        }
        lo = std::min(lo, spec.means[i] - 10.0 * spec.scales[i]);
        hi = std::max(hi, spec.means[i] + 10.0 * spec.scales[i]);
        smax = std::max(smax, spec.scales[i]);
      }
      auto cdf = [&](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          s += spec.weights[i] * std_normal_cdf((x - spec.means[i]) / spec.scales[i]);
        }
        return s;
      };
      for (int j = 1; j <= p; ++j) {
        const double q = (j - 0.5) / p;
        auto f = [&](double x) { return cdf(x) - q; };
        eta[j - 1] = detail::solve_monotone(f, lo, hi, true, true, 1e-12 * smax);
      }
      return eta;
    }
    case EtaSpec::Kind::kExplicit: {
      if (static_cast<int>(spec.values.size()) != p) {
        throw std::domain_error("resolve_eta: explicit vector must have length p");
      }
      for (double v : spec.values) {
        if (!std::isfinite(v)) {
          throw std::domain_error("resolve_eta: explicit values must be finite");
        }
      }
      return spec.values;
    }
  }
  throw std::logic_error("resolve_eta: unknown spec kind");
}

ProcedureSpec procedure_by_name(const std::string& name) {
  ProcedureSpec spec;
  spec.name = name;
  if (name == "unadjusted") {
    spec.kind = ProcedureSpec::Kind::kUnadjusted;
  } else if (name == "bonferroni") {
    spec.kind = ProcedureSpec::Kind::kBonferroni;
  } else if (name == "conditional-quantile") {
    spec.kind = ProcedureSpec::Kind::kConditionalQuantile;
  } else if (name == "hybrid") {
    spec.kind = ProcedureSpec::Kind::kHybrid;
    spec.beta_factor = 0.1;
  } else if (name == "oracle") {
    spec.kind = ProcedureSpec::Kind::kOracle;
  } else if (name == "profile") {
    spec.kind = ProcedureSpec::Kind::kAdaptive;
    spec.estimator.kind = EtaKind::kProfile;
  } else if (name == "conditional") {
    spec.kind = ProcedureSpec::Kind::kAdaptive;
    spec.estimator.kind = EtaKind::kConditional;
  } else if (name == "bayes") {
    spec.kind = ProcedureSpec::Kind::kAdaptive;
    spec.estimator.kind = EtaKind::kBayes;
    spec.estimator.prior = HyperParams{0.0, 1.0};
  } else if (name == "gaussian-eb") {
    spec.kind = ProcedureSpec::Kind::kAdaptive;
    spec.estimator.kind = EtaKind::kGaussianEb;
  } else if (name == "np-eb") {
    spec.kind = ProcedureSpec::Kind::kAdaptive;
    spec.estimator.kind = EtaKind::kNpEb;
  } else {
    throw std::invalid_argument("unknown procedure name '" + name + "'");
  }
  return spec;
}

ExperimentResult coverage_width_experiment(const std::vector<ProcedureSpec>& procedures,
                                           const Scenario& scenario, int n_threads) {
  validate_scenario(scenario);
  if (procedures.empty()) {
    throw std::invalid_argument("coverage_width_experiment: no procedures");
  }
  const int workers = resolve_threads(n_threads);
  const std::vector<double> eta = resolve_eta(scenario.eta_spec, scenario.p);
  const int n_proc = static_cast<int>(procedures.size());

  ExperimentResult result;
  for (std::size_t ci = 0; ci < scenario.theta_values.size(); ++ci) {
    const double theta = scenario.theta_values[ci];
    const SelectiveModel model(eta, scenario.tau, scenario.sigma);
    const SelectiveEngine engine(model, 32768);
    const double sel_logprob = engine.log_sel_prob(theta);
    const MarginalSampler sampler(engine, theta);

    CellSlots slots(n_proc, scenario.n_rep);
    parallel_reps(scenario.n_rep, workers, [&](int lo, int hi) {
      for (int r = lo; r < hi; ++r) {
        Rng rng(scenario.seed, static_cast<std::uint64_t>(ci),
                static_cast<std::uint64_t>(r));
        const SelectedDatum d = sampler.draw(rng);
        for (int pi = 0; pi < n_proc; ++pi) {
          const std::size_t slot = slots.at(pi, r);
          try {
            const Interval iv = apply_procedure(procedures[pi], d, scenario.tau,
                                                scenario.sigma, scenario.alpha, &engine,
                                                rng);
            slots.covered[slot] = iv.contains(theta) ? 1 : 0;
            slots.width[slot] = iv.width();
          } catch (const std::exception&) {
            slots.errored[slot] = 1;
          }
        }
      }
    });

    for (int pi = 0; pi < n_proc; ++pi) {
      CellResult cell = reduce_cell(slots, pi, scenario.id, procedures[pi].name, theta,
                                    sel_logprob);
      enforce_error_budget(cell);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

MarginalResult marginal_coverage_experiment(const std::vector<ProcedureSpec>& procedures,
                                            const std::vector<double>& means,
                                            const std::vector<double>& scales,
                                            double alpha, int n_rep, std::uint64_t seed,
                                            int n_threads) {
  const std::size_t k = means.size();
  if (k < 2 || scales.size() != k) {
    throw std::invalid_argument(
        "marginal_coverage_experiment: need >= 2 groups with matching scales");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("marginal_coverage_experiment: scales must be > 0");
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0) || n_rep < 1 || procedures.empty()) {
    throw std::invalid_argument("marginal_coverage_experiment: invalid arguments");
  }
  const int workers = resolve_threads(n_threads);
  const int n_proc = static_cast<int>(procedures.size());

  CellSlots slots(n_proc, n_rep);
  std::vector<int> winner(static_cast<std::size_t>(n_rep), -1);

  parallel_reps(n_rep, workers, [&](int lo, int hi) {
    std::vector<double> z(k), x(k - 1), tau(k - 1);
    for (int r = lo; r < hi; ++r) {
      Rng rng(seed, 0, static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < k; ++i) z[i] = means[i] + scales[i] * rng.normal();
      const std::size_t s = static_cast<std::size_t>(
          std::max_element(z.begin(), z.end()) - z.begin());
      winner[static_cast<std::size_t>(r)] = static_cast<int>(s);

      SelectedDatum d;
      d.y = z[s];
      std::size_t m = 0;
      std::vector<double> eta_true(k - 1);
      for (std::size_t i = 0; i < k; ++i) {
        if (i == s) continue;
        x[m] = z[i];
        tau[m] = scales[i];
        eta_true[m] = means[i];
        ++m;
      }
      d.x = x;
      const double sigma = scales[s];
      const double theta_true = means[s];

      // The oracle at this selection event plugs in the true unselected
      // means; its engine is rebuilt per replication because the event
      // (and hence the model) changes.
      for (int pi = 0; pi < n_proc; ++pi) {
        const std::size_t slot = slots.at(pi, r);
        try {
          Interval iv;
          if (procedures[pi].kind == ProcedureSpec::Kind::kOracle) {
            SelectiveModel truth(eta_true, tau, sigma);
            SelectiveEngine engine(std::move(truth), 32768,
                                   SelectiveEngine::TableMode::kNone);
            if (eta_true.size() >= 8) {
              const auto [emin, emax] =
                  std::minmax_element(eta_true.begin(), eta_true.end());
              const double tau_max = *std::max_element(tau.begin(), tau.end());
              const double tau_min = *std::min_element(tau.begin(), tau.end());
              engine.build_table(*emin - 10.0 * tau_max,
                                 std::max(d.y, *emax) + 10.0 * sigma,
                                 0.02 * std::min(tau_min, sigma));
            }
            iv = oracle_interval(engine, d.y, alpha);
          } else {
            iv = apply_procedure(procedures[pi], d, tau, sigma, alpha, nullptr, rng);
          }
          slots.covered[slot] = iv.contains(theta_true) ? 1 : 0;
          slots.width[slot] = iv.width();
        } catch (const std::exception&) {
          slots.errored[slot] = 1;
        }
      }
    }
  });

  MarginalResult result;
  result.selection_frequency.assign(k, 0.0);
  for (int r = 0; r < n_rep; ++r) {
    result.selection_frequency[static_cast<std::size_t>(winner[r])] += 1.0;
  }
  for (double& f : result.selection_frequency) f /= n_rep;

  for (int pi = 0; pi < n_proc; ++pi) {
    CellResult cell =
        reduce_cell(slots, pi, "marginal", procedures[pi].name, kNaN, kNaN);
    enforce_error_budget(cell);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

PowerCurve power_curve(const ProcedureSpec& test, const Scenario& scenario,
                       double theta_true, const std::vector<double>& t_grid,
                       int n_threads) {
  validate_scenario(scenario);
  if (t_grid.empty()) throw std::invalid_argument("power_curve: empty t grid");
  if (!std::isfinite(theta_true)) {
    throw std::invalid_argument("power_curve: theta_true must be finite");
  }
  const int workers = resolve_threads(n_threads);
  const std::vector<double> eta = resolve_eta(scenario.eta_spec, scenario.p);
  const SelectiveModel model(eta, scenario.tau, scenario.sigma);
  const SelectiveEngine engine(model, 32768);
  const MarginalSampler sampler(engine, theta_true);
  const std::size_t nt = t_grid.size();
  const bool per_t = test.kind == ProcedureSpec::Kind::kAdaptive &&
                     is_theta_dependent(test.estimator);

  // reject[t * n_rep + r]; 2 marks a failed replication.
  std::vector<std::uint8_t> reject(nt * static_cast<std::size_t>(scenario.n_rep), 2);
  parallel_reps(scenario.n_rep, workers, [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      Rng rng(scenario.seed, 0, static_cast<std::uint64_t>(r));
      const SelectedDatum d = sampler.draw(rng);
      if (per_t) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
          try {
            EtaEstimator est = test.estimator;
            const std::vector<double> eta_hat =
                estimate_eta(est, d, scenario.tau, scenario.sigma, t_grid[ti]);
            SelectiveModel plug(eta_hat, scenario.tau, scenario.sigma);
            const SelectiveEngine pe(std::move(plug), 32768);
            const auto [l, u] = pe.quantiles(t_grid[ti], scenario.alpha);
            reject[ti * scenario.n_rep + r] = (l < d.y && d.y < u) ? 0 : 1;
          } catch (const std::exception&) {
            reject[ti * scenario.n_rep + r] = 2;
          }
        }
      } else {
        try {
          const Interval iv = apply_procedure(test, d, scenario.tau, scenario.sigma,
                                              scenario.alpha, &engine, rng);
          for (std::size_t ti = 0; ti < nt; ++ti) {
            reject[ti * scenario.n_rep + r] = iv.contains(t_grid[ti]) ? 0 : 1;
          }
        } catch (const std::exception&) {
          // leave the whole replication marked failed
        }
      }
    }
  });

  PowerCurve out;
  out.t = t_grid;
  out.reject.resize(nt);
  out.se.resize(nt);
  std::vector<std::uint8_t> rep_failed(static_cast<std::size_t>(scenario.n_rep), 0);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    long long rej = 0;
    int ok = 0;
    for (int r = 0; r < scenario.n_rep; ++r) {
      const std::uint8_t v = reject[ti * scenario.n_rep + r];
      if (v == 2) {
        rep_failed[static_cast<std::size_t>(r)] = 1;
        continue;
      }
      ++ok;
      rej += v;
    }
    out.reject[ti] = ok > 0 ? static_cast<double>(rej) / ok : kNaN;
    out.se[ti] = ok > 0 ? std::sqrt(std::max(out.reject[ti] * (1.0 - out.reject[ti]),
                                             0.0) / ok)
                        : kNaN;
  }
  for (std::uint8_t f : rep_failed) out.n_err += f;
  if (out.n_err * 100 > scenario.n_rep) {
    throw std::runtime_error("power_curve: " + std::to_string(out.n_err) + " of " +
                             std::to_string(scenario.n_rep) +
                             " replications errored (> 1% budget)");
  }
  return out;
}

PercentileCurves estimator_percentiles(const EtaEstimator& estimator,
                                       const Scenario& scenario,
                                       const std::vector<double>& theta_grid,
                                       int n_threads) {
  validate_scenario(scenario);
  if (theta_grid.empty()) {
    throw std::invalid_argument("estimator_percentiles: empty theta grid");
  }
  const int workers = resolve_threads(n_threads);
  const std::vector<double> eta = resolve_eta(scenario.eta_spec, scenario.p);
  const double theta_data = scenario.theta_values.front();
  const SelectiveModel model(eta, scenario.tau, scenario.sigma);
  const SelectiveEngine engine(model, 32768);
  const MarginalSampler sampler(engine, theta_data);
  const std::size_t nt = theta_grid.size();
  const bool per_t = is_theta_dependent(estimator);

  std::vector<double> value(nt * static_cast<std::size_t>(scenario.n_rep), kNaN);
  std::vector<std::uint8_t> rep_failed(static_cast<std::size_t>(scenario.n_rep), 0);
  parallel_reps(scenario.n_rep, workers, [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      Rng rng(scenario.seed, 0, static_cast<std::uint64_t>(r));
      const SelectedDatum d = sampler.draw(rng);
      EtaEstimator est = estimator;
      if (est.kind == EtaKind::kNpEb) est.np_seed = rng.next_u64();
      if (per_t) {
        for (std::size_t ti = 0; ti < nt; ++ti) {
          try {
            value[ti * scenario.n_rep + r] =
                estimate_eta(est, d, scenario.tau, scenario.sigma, theta_grid[ti])
                    .front();
          } catch (const std::exception&) {
            rep_failed[static_cast<std::size_t>(r)] = 1;
          }
        }
      } else {
        try {
          const double v =
              estimate_eta(est, d, scenario.tau, scenario.sigma).front();
          for (std::size_t ti = 0; ti < nt; ++ti) value[ti * scenario.n_rep + r] = v;
        } catch (const std::exception&) {
          rep_failed[static_cast<std::size_t>(r)] = 1;
        }
      }
    }
  });

  PercentileCurves out;
  out.theta = theta_grid;
  out.q25.resize(nt);
  out.q50.resize(nt);
  out.q75.resize(nt);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(scenario.n_rep));
    for (int r = 0; r < scenario.n_rep; ++r) {
      const double v = value[ti * scenario.n_rep + r];
      if (!std::isnan(v)) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    out.q25[ti] = sorted_quantile(vals, 0.25);
    out.q50[ti] = sorted_quantile(vals, 0.5);
    out.q75[ti] = sorted_quantile(vals, 0.75);
  }
  for (std::uint8_t f : rep_failed) out.n_err += f;
  if (out.n_err * 100 > scenario.n_rep) {
    throw std::runtime_error("estimator_percentiles: " + std::to_string(out.n_err) +
                             " of " + std::to_string(scenario.n_rep) +
                             " replications errored (> 1% budget)");
  }
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace selci
