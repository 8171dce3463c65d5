// Acceptance gate for the selected-mean inference library.
//
// Runs ten end-to-end criteria covering oracle calibration, conditional
// calibration, the rare-selection probability, benchmark constants, width
// divergence, qualitative procedure ordering, empirical-Bayes tracking of the
// oracle, the distribution-theory lemma suite, marginal coverage, and
// thread-count determinism. Each criterion prints exactly one [PASS]/[FAIL]
// line with its measured values; the exit code is nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "selci/csv.hpp"
#include "selci/estimators.hpp"
#include "selci/gauss.hpp"
#include "selci/procedures.hpp"
#include "selci/rng.hpp"
#include "selci/selective.hpp"
#include "selci/simulation.hpp"
#include "selci/theory.hpp"
#include "selci/truncated_normal.hpp"

using namespace selci;

namespace {

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Gate {
  bool all_ok = true;
  int n_pass = 0, n_fail = 0;

  void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << idx << ". " << name << ": "
              << detail << std::endl;
    (ok ? n_pass : n_fail) += 1;
    all_ok = all_ok && ok;
  }
};

double coverage_band(int n) { return 3.0 * std::sqrt(0.95 * 0.05 / n); }

EtaSpec narrow_design() {
  EtaSpec spec;
  spec.kind = EtaSpec::Kind::kGaussianQuantiles;
  spec.s0 = 0.5;
  return spec;
}

Scenario narrow_scenario(std::vector<double> thetas, int n_rep, std::uint64_t seed) {
  Scenario sc;
  sc.id = "narrow";
  sc.p = 50;
  sc.sigma = 1.0;
  sc.tau.assign(50, 1.0);
  sc.eta_spec = narrow_design();
  sc.theta_values = std::move(thetas);
  sc.alpha = 0.05;
  sc.n_rep = n_rep;
  sc.seed = seed;
  return sc;
}

// ---------------------------------------------------------------- criterion 1

void criterion_1(Gate& gate) {
  const int n_rep = 10000;
  const double band = coverage_band(n_rep);
  const std::vector<ProcedureSpec> oracle = {procedure_by_name("oracle")};
  bool ok = true;
  double worst1 = 0.0, worst50 = 0.0;

  Stopwatch t1;
  const std::vector<std::pair<double, double>> design1 = {
      {0.0, 0.0}, {0.0, -2.0}, {1.0, 1.0}, {2.0, -1.0}, {0.5, 0.5}};
  for (std::size_t i = 0; i < design1.size(); ++i) {
    Scenario sc;
    sc.id = "one-competitor";
    sc.p = 1;
    sc.sigma = 1.0;
    sc.tau = {1.0};
    sc.eta_spec.kind = EtaSpec::Kind::kExplicit;
    sc.eta_spec.values = {design1[i].first};
    sc.theta_values = {design1[i].second};
    sc.alpha = 0.05;
    sc.n_rep = n_rep;
    sc.seed = 101 + i;
    const ExperimentResult res = coverage_width_experiment(oracle, sc, 1);
    worst1 = std::max(worst1, std::abs(res.cells.front().coverage - 0.95));
  }
  const double sec1 = t1.seconds();

  Stopwatch t50;
  const Scenario sc50 = narrow_scenario({-2.0, -1.0, 0.0, 1.0, 2.0}, n_rep, 202);
  const ExperimentResult res50 = coverage_width_experiment(oracle, sc50, 1);
  for (const CellResult& c : res50.cells) {
    worst50 = std::max(worst50, std::abs(c.coverage - 0.95));
  }
  const double sec50 = t50.seconds();

  ok = worst1 <= band && worst50 <= band && sec1 < 600.0 && sec50 < 600.0;
  gate.report(1, "oracle selective coverage", ok,
              fmt("worst |coverage-0.95|: p=1 %.4f, p=50 %.4f (band %.4f, 1e4 "
                  "reps/cell, 5 cells each); scenario times %.1fs / %.1fs (< 600s)",
                  worst1, worst50, band, sec1, sec50));
}

// ---------------------------------------------------------------- criterion 2

void criterion_2(Gate& gate) {
  const int n_rep = 10000;
  const double band = coverage_band(n_rep);
  double worst = 0.0;
  std::string worst_cell = "-";
  int idx = 0;
  for (double xm : {-2.0, 0.0, 2.0}) {
    for (double th : {-2.0, 0.0, 2.0}) {
      const TruncatedNormal tn(th, 1.0, xm, kInf);
      Rng rng(3000 + idx++);
      int cover = 0;
      SelectedDatum d;
      d.x = {xm};
      for (int r = 0; r < n_rep; ++r) {
        d.y = trunc_normal_sample(tn, rng);
        const Interval iv = conditional_quantile_interval(d, 1.0, 0.05);
        cover += iv.contains(th) ? 1 : 0;
      }
      const double cov = static_cast<double>(cover) / n_rep;
      if (std::abs(cov - 0.95) > worst) {
        worst = std::abs(cov - 0.95);
        worst_cell = fmt("x_max=%g, theta=%g -> %.4f", xm, th, cov);
      }
    }
  }
  gate.report(2, "conditional-quantile conditional coverage", worst <= band,
              fmt("9 cells x 1e4 truncated draws; worst cell %s, |dev| %.4f "
                  "(band %.4f)",
                  worst_cell.c_str(), worst, band));
}

// ---------------------------------------------------------------- criterion 3

void criterion_3(Gate& gate) {
  Stopwatch t;
  const std::vector<double> eta = resolve_eta(narrow_design(), 50);
  const SelectiveModel model(eta, std::vector<double>(50, 1.0), 1.0);
  const SelectiveEngine engine(model, 32768);
  const double lsp = engine.log_sel_prob(-2.0);
  const double sec = t.seconds();
  const double phat = std::exp(lsp);
  // Two significant digits of the probability: p rounds to 1.8e-5.
  const bool ok = std::abs(phat - 1.8e-5) <= 0.05e-5 && sec < 1.0;
  gate.report(3, "narrow-scenario selection probability", ok,
              fmt("log prob %.6f, prob %.6e (target 1.8e-05 to 2 significant "
                  "digits), quadrature %.3fs (< 1s)",
                  lsp, phat, sec));
}

// ---------------------------------------------------------------- criterion 4

void criterion_4(Gate& gate) {
  const double bonf_half = 0.5 * bonferroni_interval(0.0, 1.0, 0.05, 50).width();
  const double relax_half = 0.5 * bonferroni_interval(0.0, 1.0, 0.005, 50).width();
  const bool ok =
      std::abs(bonf_half - 3.29) <= 0.005 && std::abs(relax_half - 3.89) <= 0.005;
  gate.report(4, "benchmark half-width constants", ok,
              fmt("simultaneous half-width %.10f (target 3.29 +- 0.005), relaxed "
                  "%.10f (target 3.89 +- 0.005) at p=50",
                  bonf_half, relax_half));
}

// ---------------------------------------------------------------- criterion 5

void criterion_5(Gate& gate) {
  const int n = 100000;
  const SelectiveModel model({0.0}, {1.0}, 1.0);
  const SelectiveEngine engine(model, 32768);
  const MarginalSampler sampler(engine, 0.0);

  std::vector<double> xs(n), ys(n);
  for (int r = 0; r < n; ++r) {
    Rng rng(404, 0, static_cast<std::uint64_t>(r));
    const SelectedDatum d = sampler.draw(rng);
    xs[r] = d.x[0];
    ys[r] = d.y;
  }

  // Conditional-quantile widths, exact per replication.
  double cq_max = 0.0, cq_sum = 0.0, cq_mean_1e3 = 0.0;
  SelectedDatum d;
  d.x = {0.0};
  for (int r = 0; r < n; ++r) {
    d.x[0] = xs[r];
    d.y = ys[r];
    const double w = conditional_quantile_interval(d, 1.0, 0.05).width();
    cq_sum += w;
    cq_max = std::max(cq_max, w);
    if (r + 1 == 1000) cq_mean_1e3 = cq_sum / 1000.0;
  }
  const double cq_mean_1e5 = cq_sum / n;

  // Oracle widths via a dense grid in y: the width is a smooth function of y
  // alone, so 4096 exact inversions plus linear interpolation reproduce the
  // per-replication widths to far better accuracy than the 2% drift bound.
  const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  const double ylo = *ymin_it, yhi = *ymax_it;
  const int m = 4096;
  std::vector<double> wgrid(m);
  for (int i = 0; i < m; ++i) {
    const double y = ylo + (yhi - ylo) * i / (m - 1);
    wgrid[i] = oracle_interval(engine, y, 0.05).width();
  }
  double or_sum = 0.0, or_mean_5e4 = 0.0;
  for (int r = 0; r < n; ++r) {
    const double pos = (ys[r] - ylo) / (yhi - ylo) * (m - 1);
    const int i = std::min(std::max(static_cast<int>(pos), 0), m - 2);
    const double f = pos - i;
    or_sum += (1.0 - f) * wgrid[i] + f * wgrid[i + 1];
    if (r + 1 == 50000) or_mean_5e4 = or_sum / 50000.0;
  }
  const double or_mean_1e5 = or_sum / n;
  const double drift = std::abs(or_mean_1e5 / or_mean_5e4 - 1.0);

  const bool ok = cq_max > 50.0 && cq_mean_1e5 > cq_mean_1e3 && drift < 0.02;
  gate.report(5, "width divergence vs. finite oracle width", ok,
              fmt("conditional-quantile: max width %.1f sigma (> 50), running "
                  "mean %.3f @1e3 -> %.3f @1e5 (must grow); oracle running mean "
                  "%.4f @5e4 -> %.4f @1e5, drift %.3f%% (< 2%%)",
                  cq_max, cq_mean_1e3, cq_mean_1e5, or_mean_5e4, or_mean_1e5,
                  100.0 * drift));
}

// --------------------------------------------------------- criteria 6 and 7

struct ProcStats {
  std::string name;
  long long cover = 0;
  double w_sum = 0.0, w_sum2 = 0.0;
  int n_ok = 0, n_err = 0;

  double coverage() const { return static_cast<double>(cover) / n_ok; }
  double cov_se() const {
    const double c = coverage();
    return std::sqrt(c * (1.0 - c) / n_ok);
  }
  double mean_width() const { return w_sum / n_ok; }
  double width_se() const {
    const double mean = mean_width();
    const double var = std::max(w_sum2 / n_ok - mean * mean, 0.0);
    return std::sqrt(var / n_ok);
  }
};

double cov_gap_in_se(const ProcStats& lo, const ProcStats& hi) {
  const double jse = std::hypot(lo.cov_se(), hi.cov_se());
  return (hi.coverage() - lo.coverage()) / std::max(jse, 1e-12);
}

double width_gap_in_se(const ProcStats& narrow, const ProcStats& wide) {
  const double jse = std::hypot(narrow.width_se(), wide.width_se());
  return (wide.mean_width() - narrow.mean_width()) / std::max(jse, 1e-12);
}

// Runs one theta cell of the narrow scenario, accumulating coverage and width
// moments per procedure. Plug-in procedures rebuild a per-replication engine
// exactly as the experiment driver does.
std::vector<ProcStats> run_narrow_cell(double theta, int n_rep,
                                       const std::vector<std::string>& procs,
                                       std::uint64_t seed) {
  const std::vector<double> eta = resolve_eta(narrow_design(), 50);
  const std::vector<double> tau(50, 1.0);
  const double sigma = 1.0, alpha = 0.05;
  const SelectiveModel model(eta, tau, sigma);
  const SelectiveEngine engine(model, 32768);
  const MarginalSampler sampler(engine, theta);

  EtaEstimator bayes_est;
  bayes_est.kind = EtaKind::kBayes;
  bayes_est.prior = {0.0, 1.0};
  EtaEstimator geb_est;
  geb_est.kind = EtaKind::kGaussianEb;

  std::vector<ProcStats> stats(procs.size());
  for (std::size_t i = 0; i < procs.size(); ++i) stats[i].name = procs[i];

  for (int r = 0; r < n_rep; ++r) {
    Rng rng(seed, 0, static_cast<std::uint64_t>(r));
    const SelectedDatum d = sampler.draw(rng);
    for (std::size_t i = 0; i < procs.size(); ++i) {
      try {
        Interval iv;
        const std::string& name = procs[i];
        if (name == "unadjusted") {
          iv = unadjusted_interval(d.y, sigma, alpha);
        } else if (name == "bonferroni") {
          iv = bonferroni_interval(d.y, sigma, alpha, 50);
        } else if (name == "hybrid") {
          iv = hybrid_interval(d, tau, sigma, alpha, 0.1 * alpha, 50);
        } else if (name == "oracle") {
          iv = oracle_interval(engine, d.y, alpha);
        } else {
          EtaEstimator est;
          if (name == "bayes") {
            est = bayes_est;
          } else if (name == "gaussian-eb") {
            est = geb_est;
          } else {  // np-eb
            est.kind = EtaKind::kNpEb;
            est.np_seed = rng.next_u64();
          }
          const std::vector<double> eta_hat = estimate_eta(est, d, tau, sigma);
          SelectiveModel plug(eta_hat, tau, sigma);
          SelectiveEngine pe(std::move(plug), 32768,
                             SelectiveEngine::TableMode::kNone);
          const auto [emin, emax] =
              std::minmax_element(eta_hat.begin(), eta_hat.end());
          pe.build_table(*emin - 10.0, std::max(d.y, *emax) + 10.0, 0.02);
          iv = oracle_interval(pe, d.y, alpha);
        }
        stats[i].cover += iv.contains(theta) ? 1 : 0;
        stats[i].w_sum += iv.width();
        stats[i].w_sum2 += iv.width() * iv.width();
        stats[i].n_ok += 1;
      } catch (const std::exception&) {
        stats[i].n_err += 1;
      }
    }
  }
  return stats;
}

void criteria_6_and_7(Gate& gate) {
  const int n_rep = 10000;
  const std::vector<std::string> procs = {"unadjusted", "bonferroni", "hybrid",
                                          "oracle",     "bayes",      "gaussian-eb",
                                          "np-eb"};
  const std::vector<ProcStats> cell = run_narrow_cell(-2.0, n_rep, procs, 606);
  const ProcStats& unadj = cell[0];
  const ProcStats& bonf = cell[1];
  const ProcStats& hyb = cell[2];
  const ProcStats& orc = cell[3];
  const std::vector<const ProcStats*> ebs = {&cell[4], &cell[5], &cell[6]};

  // --- criterion 6: qualitative ordering at theta = -2, all gaps > 3 joint SE.
  bool ok6 = true;
  for (const ProcStats& s : cell) ok6 = ok6 && s.n_err * 100 <= n_rep;
  ok6 = ok6 && cov_gap_in_se(unadj, bonf) > 3.0;
  ok6 = ok6 && cov_gap_in_se(bonf, hyb) > 3.0;
  double min_eb_cov_gap = kInf, min_eb_w_gap = kInf;
  for (const ProcStats* eb : ebs) {
    min_eb_cov_gap = std::min(min_eb_cov_gap, cov_gap_in_se(hyb, *eb));
    min_eb_w_gap = std::min({min_eb_w_gap, width_gap_in_se(bonf, *eb),
                             width_gap_in_se(hyb, *eb)});
  }
  ok6 = ok6 && min_eb_cov_gap > 3.0;
  ok6 = ok6 && width_gap_in_se(unadj, bonf) > 3.0;
  ok6 = ok6 && width_gap_in_se(unadj, hyb) > 3.0;
  ok6 = ok6 && min_eb_w_gap > 3.0;
  const double oracle_dev = std::abs(orc.coverage() - 0.95);
  ok6 = ok6 && oracle_dev <= coverage_band(n_rep);

  gate.report(
      6, "qualitative ordering in the narrow scenario", ok6,
      fmt("theta=-2, 1e4 reps: coverage %.3f (unadjusted) < %.3f (simultaneous) "
          "< %.3f (hybrid) < %.3f (min of bayes/gaussian-eb/np-eb), min gap "
          "%.1f joint SEs; width %.2f (unadjusted) < %.2f/%.2f "
          "(simultaneous/hybrid) < %.2f (min EB), min gap %.1f joint SEs; "
          "oracle anchor |%.4f - 0.95| <= %.4f; measured only, not ordered: "
          "simultaneous width %.2f vs hybrid width %.2f",
          unadj.coverage(), bonf.coverage(), hyb.coverage(),
          std::min({ebs[0]->coverage(), ebs[1]->coverage(), ebs[2]->coverage()}),
          std::min({cov_gap_in_se(unadj, bonf), cov_gap_in_se(bonf, hyb),
                    min_eb_cov_gap}),
          unadj.mean_width(), bonf.mean_width(), hyb.mean_width(),
          std::min({ebs[0]->mean_width(), ebs[1]->mean_width(),
                    ebs[2]->mean_width()}),
          std::min({width_gap_in_se(unadj, bonf), width_gap_in_se(unadj, hyb),
                    min_eb_w_gap}),
          orc.coverage(), coverage_band(n_rep), bonf.mean_width(),
          hyb.mean_width()));

  // --- criterion 7: gaussian-EB tracks the oracle across theta.
  const ProcStats& geb2 = cell[5];
  bool ok7 = geb2.coverage() >= 0.90 &&
             std::abs(geb2.mean_width() / orc.mean_width() - 1.0) <= 0.25;
  std::string detail7 =
      fmt("theta=-2: coverage %.3f, width ratio %.3f (1e4 reps)",
          geb2.coverage(), geb2.mean_width() / orc.mean_width());
  for (double theta : {-1.0, 0.0, 1.0}) {
    const std::vector<ProcStats> c =
        run_narrow_cell(theta, 4000, {"oracle", "gaussian-eb"},
                        707 + static_cast<std::uint64_t>(theta * 100 + 1000));
    const double ratio = c[1].mean_width() / c[0].mean_width();
    ok7 = ok7 && c[1].coverage() >= 0.90 && std::abs(ratio - 1.0) <= 0.25;
    detail7 += fmt("; theta=%g: coverage %.3f, width ratio %.3f (4e3 reps)",
                   theta, c[1].coverage(), ratio);
  }
  gate.report(7, "gaussian-EB tracks the oracle", ok7,
              detail7 + " [need coverage >= 0.90, ratio within 1 +- 0.25]");
}

// ---------------------------------------------------------------- criterion 8

void criterion_8(Gate& gate) {
  bool ok = true;
  Stopwatch det;

  // Closed form of the one-competitor selection probability.
  double worst_c = 0.0;
  for (double eta : {0.0, 0.3, 1.0, 2.0, 4.0, 7.0, 10.0}) {
    const CEtaCheck c = c_eta_check(eta);
    worst_c = std::max(worst_c, std::abs(c.quadrature - c.closed_form));
  }
  ok = ok && worst_c <= 1e-8;

  // Circular-section probability: bounds and monotonicity.
  bool section_ok = true;
  for (double delta : {0.5, 1.0, 2.0, 3.0}) {
    const double ub = 1.0 - std::exp(-0.5 * delta * delta);
    const double lb = chi2_3_cdf(delta * delta);
    double prev = kInf;
    for (double eta = 0.0; eta <= 10.0 + 1e-12; eta += 0.25) {
      const double p = prob_B(eta, delta);
      section_ok = section_ok && p < prev + 1e-10 && p <= ub + 1e-8 && p > lb;
      prev = p;
    }
  }
  ok = ok && section_ok;

  // Chi-square(3) identity against the closed form 2*Phi(s) - 1 - 2*s*phi(s).
  double worst_chi = 0.0;
  for (double t : {0.25, 1.0, 4.0, 9.0, 30.0}) {
    const double s = std::sqrt(t);
    const double closed = 2.0 * std_normal_cdf(s) - 1.0 - 2.0 * s * std_normal_pdf(s);
    worst_chi = std::max(worst_chi, std::abs(chi2_3_cdf(t) - closed));
  }
  ok = ok && worst_chi <= 1e-10;

  // Mill's ratio sandwich, strict across the whole working range.
  bool mills_ok = true;
  for (double x = 0.01; x <= 40.0 + 1e-9; x += 0.01) {
    const auto b = mills_ratio_bounds(x);
    mills_ok = mills_ok && b.lower < b.ratio && b.ratio < b.upper;
  }
  ok = ok && mills_ok;
  const double det_sec = det.seconds();
  ok = ok && det_sec < 10.0;

  // Monte Carlo: the shifted section always beats the chi-square(3) bound.
  Stopwatch mc;
  double worst_margin = kInf;
  int idx = 0;
  for (const auto& [theta, r] : std::vector<std::pair<double, double>>{
           {-3.0, 2.0}, {0.0, 1.5}, {3.0, 1.0}}) {
    Rng rng(808 + idx++);
    const McEstimate est = prob_Bstar(theta, r, 1000000, rng);
    worst_margin =
        std::min(worst_margin, est.value - (chi2_3_cdf(r * r) - 3.0 * est.se));
  }
  ok = ok && worst_margin >= 0.0;
  const double mc_sec = mc.seconds();
  ok = ok && mc_sec < 300.0;

  gate.report(8, "distribution-theory lemma suite", ok,
              fmt("closed-form max err %.2e (<= 1e-8); section bounds+monotone "
                  "%s; chi2_3 identity max err %.2e (<= 1e-10); Mill sandwich "
                  "strict on [0.01,40] %s; deterministic %.1fs (< 10s); MC "
                  "worst margin above bound %+.4f over 3x1e6 draws, %.1fs (< "
                  "300s)",
                  worst_c, section_ok ? "ok" : "VIOLATED", worst_chi,
                  mills_ok ? "ok" : "VIOLATED", det_sec, worst_margin, mc_sec));
}

// ---------------------------------------------------------------- criterion 9

void criterion_9(Gate& gate) {
  const int n_rep = 10000;
  const std::vector<double> means = resolve_eta(narrow_design(), 51);
  const std::vector<double> scales(51, 1.0);
  const std::vector<ProcedureSpec> procs = {procedure_by_name("bonferroni"),
                                            procedure_by_name("hybrid")};
  const MarginalResult res =
      marginal_coverage_experiment(procs, means, scales, 0.05, n_rep, 909, 1);
  const CellResult& b = res.cells[0];
  const CellResult& h = res.cells[1];
  const bool ok = b.coverage >= 0.95 - 3.0 * b.coverage_se &&
                  h.coverage >= 0.95 - 3.0 * h.coverage_se;
  gate.report(9, "marginal coverage over 51 winners", ok,
              fmt("1e4 reps: simultaneous %.4f (floor %.4f), hybrid %.4f "
                  "(floor %.4f)",
                  b.coverage, 0.95 - 3.0 * b.coverage_se, h.coverage,
                  0.95 - 3.0 * h.coverage_se));
}

// --------------------------------------------------------------- criterion 10

void criterion_10(Gate& gate) {
  Scenario sc;
  sc.id = "determinism";
  sc.p = 5;
  sc.sigma = 1.0;
  sc.tau.assign(5, 1.0);
  sc.eta_spec = narrow_design();
  sc.theta_values = {-1.0, 0.0};
  sc.alpha = 0.05;
  sc.n_rep = 50;
  sc.seed = 1010;
  std::vector<ProcedureSpec> procs;
  for (const char* name : {"unadjusted", "bonferroni", "conditional-quantile",
                           "hybrid", "oracle", "bayes", "gaussian-eb", "np-eb"}) {
    procs.push_back(procedure_by_name(name));
  }
  const std::string csv1 =
      format_results_csv(coverage_width_experiment(procs, sc, 1).cells);
  const std::string csv3 =
      format_results_csv(coverage_width_experiment(procs, sc, 3).cells);

  const std::vector<ProcedureSpec> mproc = {procedure_by_name("conditional-quantile"),
                                            procedure_by_name("hybrid")};
  const std::string m1 = format_results_csv(
      marginal_coverage_experiment(mproc, {0.0, 0.3, 0.6}, {1.0, 1.0, 1.0}, 0.05,
                                   300, 11, 1)
          .cells);
  const std::string m4 = format_results_csv(
      marginal_coverage_experiment(mproc, {0.0, 0.3, 0.6}, {1.0, 1.0, 1.0}, 0.05,
                                   300, 11, 4)
          .cells);

  const bool ok = csv1 == csv3 && m1 == m4;
  gate.report(10, "thread-count determinism", ok,
              fmt("coverage experiment CSV (8 procedures, 2 cells, %zu bytes): 1 "
                  "vs 3 threads %s; marginal experiment CSV (%zu bytes): 1 vs 4 "
                  "threads %s",
                  csv1.size(), csv1 == csv3 ? "byte-identical" : "DIFFER",
                  m1.size(), m1 == m4 ? "byte-identical" : "DIFFER"));
}

}  // namespace

int main() {
  std::cout << "acceptance gate: selected-mean inference library" << std::endl;
  Stopwatch total;
  Gate gate;
  criterion_1(gate);
  criterion_2(gate);
  criterion_3(gate);
  criterion_4(gate);
  criterion_5(gate);
  criteria_6_and_7(gate);
  criterion_8(gate);
  criterion_9(gate);
  criterion_10(gate);
  std::cout << fmt("acceptance: %d/%d criteria passed in %.1f s",
                   gate.n_pass, gate.n_pass + gate.n_fail, total.seconds())
            << std::endl;
  return gate.all_ok ? 0 : 1;
}
