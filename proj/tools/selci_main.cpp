// Command-line front end: selection-adjusted confidence intervals for user
// data (`interval`), Monte Carlo experiments from a JSON config (`simulate`),
// numerical verification of the supporting distribution theory
// (`theory-check`), and nuisance-mean estimator fits (`fit`).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selci/config.hpp"
#include "selci/csv.hpp"
#include "selci/estimators.hpp"
#include "selci/gauss.hpp"
#include "selci/procedures.hpp"
#include "selci/rng.hpp"
#include "selci/selective.hpp"
#include "selci/simulation.hpp"
#include "selci/svg.hpp"
#include "selci/theory.hpp"

namespace {

using namespace selci;

int threads_from_env() {
  const char* env = std::getenv("SELECTIVE_CI_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0) {
    throw std::runtime_error(
        "SELECTIVE_CI_THREADS must be a nonnegative integer, got '" +
        std::string(env) + "'");
  }
  return static_cast<int>(v);
}

struct SplitData {
  SelectedDatum d;
  std::vector<double> tau;
  double sigma = 1.0;
  std::string selected_group;
};

SplitData split_selected(const GroupData& g) {
  SplitData out;
  const auto sel = static_cast<std::size_t>(g.selected);
  out.d.y = g.value[sel];
  out.sigma = g.scale[sel];
  out.selected_group = g.group[sel];
  for (std::size_t i = 0; i < g.value.size(); ++i) {
    if (i == sel) continue;
    out.d.x.push_back(g.value[i]);
    out.tau.push_back(g.scale[i]);
  }
  return out;
}

void print_interval_row(const std::string& name, const Interval& iv) {
  std::printf("%-22s %14.6f %14.6f %14.6f\n", name.c_str(), iv.lower, iv.upper,
              iv.width());
}

int cmd_interval(const std::string& data_path, bool argmax, double alpha,
                 std::uint64_t seed, const std::vector<double>& oracle_eta) {
  const GroupData g = load_group_data(data_path, argmax);
  const SplitData sd = split_selected(g);
  const int p = static_cast<int>(sd.d.x.size());

  std::printf("selected group '%s': value %.6g, scale %.6g, %d competitor(s), alpha %g\n",
              sd.selected_group.c_str(), sd.d.y, sd.sigma, p, alpha);
  std::printf("%-22s %14s %14s %14s\n", "procedure", "lower", "upper", "width");

  print_interval_row("unadjusted", unadjusted_interval(sd.d.y, sd.sigma, alpha));
  print_interval_row("bonferroni", bonferroni_interval(sd.d.y, sd.sigma, alpha, p));
  print_interval_row("conditional-quantile",
                     conditional_quantile_interval(sd.d, sd.sigma, alpha));
  print_interval_row("hybrid",
                     hybrid_interval(sd.d, sd.tau, sd.sigma, alpha, 0.1 * alpha, p));

  EtaEstimator geb;
  geb.kind = EtaKind::kGaussianEb;
  print_interval_row("gaussian-eb", adaptive_interval(sd.d, sd.tau, sd.sigma, alpha, geb));

  EtaEstimator npeb;
  npeb.kind = EtaKind::kNpEb;
  npeb.np_seed = seed;
  print_interval_row("np-eb", adaptive_interval(sd.d, sd.tau, sd.sigma, alpha, npeb));

  if (!oracle_eta.empty()) {
    if (static_cast<int>(oracle_eta.size()) != p) {
      throw std::runtime_error("--eta must list one mean per unselected group");
    }
    print_interval_row(
        "oracle", oracle_interval(SelectiveModel(oracle_eta, sd.tau, sd.sigma), sd.d.y,
                                  alpha));
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, bool have_seed, std::uint64_t seed,
                 bool have_alpha, double alpha, const std::string& out_override,
                 int threads_flag, bool fast) {
  RunConfig cfg = load_config(config_path);
  if (have_seed) cfg.scenario.seed = seed;
  if (have_alpha) cfg.scenario.alpha = alpha;
  if (!out_override.empty()) cfg.out_csv = out_override;
  if (threads_flag > 0) cfg.threads = threads_flag;
  if (cfg.threads <= 0) cfg.threads = threads_from_env();
  if (fast) cfg.scenario.n_rep = std::min(cfg.scenario.n_rep, 100);

  const int threads = resolve_threads(cfg.threads);
  std::fprintf(stderr, "scenario '%s': p=%d, %zu theta value(s), %d replication(s), %d thread(s)\n",
               cfg.scenario.id.c_str(), cfg.scenario.p, cfg.scenario.theta_values.size(),
               cfg.scenario.n_rep, threads);

  const ExperimentResult res =
      coverage_width_experiment(cfg.procedures, cfg.scenario, threads);
  write_text_file(cfg.out_csv, format_results_csv(res.cells));
  std::printf("wrote %s (%zu cells)\n", cfg.out_csv.c_str(), res.cells.size());

  if (!cfg.out_svg.empty()) {
    std::vector<SvgSeries> series;
    for (const ProcedureSpec& proc : cfg.procedures) {
      SvgSeries s;
      s.name = proc.name;
      for (const CellResult& c : res.cells) {
        if (c.procedure != proc.name) continue;
        s.x.push_back(c.theta);
        s.y.push_back(c.coverage);
      }
      series.push_back(std::move(s));
    }
    write_text_file(cfg.out_svg, svg_line_chart("selective coverage: " + cfg.scenario.id,
                                                "theta", "coverage", series));
    std::printf("wrote %s\n", cfg.out_svg.c_str());
  }
  return 0;
}

struct CheckReport {
  int failures = 0;

  void row(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%-44s %s  %s\n", name.c_str(), ok ? "pass" : "FAIL", detail.c_str());
    if (!ok) ++failures;
  }
};

int cmd_theory_check(bool fast, std::uint64_t seed, double delta) {
  std::printf("theory checks (delta=%g, seed=%llu%s)\n", delta,
              static_cast<unsigned long long>(seed), fast ? ", fast subset" : "");
  CheckReport rep;
  char detail[160];

  // Selection probability: quadrature against the closed form for one
  // competitor at equal scales.
  {
    double worst = 0.0;
    const double step = fast ? 1.0 : 0.25;
    for (double eta = 0.0; eta <= 6.0 + 1e-9; eta += step) {
      const CEtaCheck c = c_eta_check(eta);
      worst = std::max(worst, std::abs(c.quadrature - c.closed_form) / c.closed_form);
    }
    std::snprintf(detail, sizeof(detail), "max rel err %.3g (tol 1e-8)", worst);
    rep.row("selection probability vs closed form", worst < 1e-8, detail);
  }

  // Circular-section probability: eta=0 closed form and monotonicity in the
  // section radius.
  {
    const double expect = -std::expm1(-0.5 * delta * delta);
    const double got = prob_B(0.0, delta);
    std::snprintf(detail, sizeof(detail), "got %.10f expected %.10f", got, expect);
    rep.row("section probability, centered case", std::abs(got - expect) < 1e-8, detail);

    bool monotone = true;
    double prev = 0.0;
    const double step = fast ? 0.5 : 0.125;
    for (double d = step; d <= 4.0 + 1e-9; d += step) {
      const double v = prob_B(1.0, d);
      if (v < prev - 1e-12 || v < 0.0 || v > 1.0) monotone = false;
      prev = v;
    }
    std::snprintf(detail, sizeof(detail), "grid step %g up to delta=4", step);
    rep.row("section probability monotone in radius", monotone, detail);
  }

  // Shifted-section probability: Monte Carlo against the closed form valid
  // for theta >= sqrt(2) r.
  {
    Rng rng(seed);
    const int n = fast ? 100000 : 1000000;
    const double theta = 3.0, r = 1.0;
    const McEstimate mc = prob_Bstar(theta, r, n, rng);
    const double expect = -std::expm1(-0.5 * r * r) / std_normal_cdf(theta / kSqrt2);
    const double err = std::abs(mc.value - expect);
    std::snprintf(detail, sizeof(detail), "mc %.6f +- %.6f, expected %.6f", mc.value,
                  mc.se, expect);
    rep.row("shifted section probability (MC)", err < 4.0 * mc.se + 1e-4, detail);
  }

  // Tail offset: positive, decreasing, and obeying the product lower bound
  // x * z(x, alpha) >= (1 - alpha)/4 used by the width-divergence argument.
  {
    const double alpha = 0.05;
    bool ok = true;
    double prev = kInf;
    double worst_product = kInf;
    const double step = fast ? 2.0 : 0.25;
    for (double x = 1.0 + step; x <= 40.0 + 1e-9; x += step) {
      const double z = z_offset(x, alpha);
      if (!(z > 0.0) || z > prev + 1e-12) ok = false;
      prev = z;
      worst_product = std::min(worst_product, x * z);
    }
    const double bound = 0.25 * (1.0 - alpha);
    std::snprintf(detail, sizeof(detail), "min x*z %.4f (bound %.4f)", worst_product,
                  bound);
    rep.row("tail offset decreasing with product bound", ok && worst_product >= bound,
            detail);
  }

  // Large-eta sandwich for the selection probability, evaluated in logs:
  // s^2/(1+s^2) < sqrt(2 pi) s e^{s^2/2} Phi(-s) < 1 with s = eta/sqrt(2).
  {
    bool ok = true;
    const double step = fast ? 10.0 : 2.5;
    for (double eta = 10.0; eta <= 40.0 + 1e-9; eta += step) {
      const double s = eta / kSqrt2;
      const double log_c = selection_log_prob(SelectiveModel({eta}, {1.0}, 1.0), 0.0);
      const double log_ratio = kLogSqrt2Pi + std::log(s) + 0.5 * s * s + log_c;
      const double log_lower = std::log(s * s) - std::log1p(s * s);
      if (!(log_lower < log_ratio && log_ratio < 0.0)) ok = false;
    }
    std::snprintf(detail, sizeof(detail), "eta in [10,40] step %g, log-domain", step);
    rep.row("selection probability sandwich bounds", ok, detail);
  }

  std::printf("%d failure(s)\n", rep.failures);
  return rep.failures == 0 ? 0 : 1;
}

int cmd_fit(const std::string& data_path, bool argmax, std::uint64_t seed) {
  const GroupData g = load_group_data(data_path, argmax);
  const SplitData sd = split_selected(g);

  const std::vector<double> cond = conditional_mle(sd.d.x, sd.d.y, sd.tau);
  const HyperParams prior{0.0, 1.0};
  const std::vector<double> bayes = bayes_mode(sd.d.x, sd.d.y, sd.tau, prior);
  const HyperParams eb = gaussian_eb_fit(sd.d.x, sd.d.y, sd.tau);
  const std::vector<double> geb = gaussian_eb_estimate(sd.d.x, eb, sd.tau);

  EtaEstimator npe;
  npe.kind = EtaKind::kNpEb;
  npe.np_seed = seed;
  const std::vector<double> npeb = estimate_eta(npe, sd.d, sd.tau, sd.sigma);

  std::printf("selected group '%s': value %.6g (excluded from fits)\n",
              sd.selected_group.c_str(), sd.d.y);
  std::printf("gaussian-eb hyperparameters: mean %.6g, variance %.6g\n", eb.m, eb.v);
  std::printf("%-16s %12s %12s %12s %12s %12s\n", "group", "value", "conditional",
              "bayes(0,1)", "gaussian-eb", "np-eb");
  std::size_t row = 0;
  for (std::size_t i = 0; i < g.value.size(); ++i) {
    if (static_cast<int>(i) == g.selected) continue;
    std::printf("%-16s %12.6f %12.6f %12.6f %12.6f %12.6f\n", g.group[i].c_str(),
                sd.d.x[row], cond[row], bayes[row], geb[row], npeb[row]);
    ++row;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selection-adjusted confidence intervals for the largest of "
               "several normal means"};
  app.require_subcommand(1);

  // interval
  std::string data_path;
  bool argmax = false;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::vector<double> oracle_eta;
  CLI::App* interval = app.add_subcommand(
      "interval", "Confidence intervals for the selected group in a data file");
  interval->add_option("--data", data_path, "delimited data file")->required();
  interval->add_flag("--argmax", argmax,
                     "select the largest value when no row is marked selected");
  interval->add_option("--alpha", alpha, "miscoverage level (default 0.05)");
  interval->add_option("--seed", seed, "seed for the nonparametric estimator");
  interval->add_option("--eta", oracle_eta,
                       "true unselected means; adds an oracle row")
      ->expected(-1);

  // simulate
  std::string config_path, out_override;
  std::uint64_t sim_seed = 0;
  double sim_alpha = 0.0;
  int threads_flag = 0;
  bool fast = false;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a coverage/width experiment from a config");
  simulate->add_option("--config", config_path, "JSON run configuration")->required();
  CLI::Option* seed_opt =
      simulate->add_option("--seed", sim_seed, "override the scenario seed");
  CLI::Option* alpha_opt =
      simulate->add_option("--alpha", sim_alpha, "override the scenario alpha");
  simulate->add_option("--out", out_override, "override the output CSV path");
  simulate->add_option("--threads", threads_flag,
                       "worker threads (0: SELECTIVE_CI_THREADS or hardware)");
  simulate->add_flag("--fast", fast, "cap replications at 100 for a smoke run");

  // theory-check
  bool tc_fast = false;
  std::uint64_t tc_seed = 1;
  double tc_delta = 2.0;
  CLI::App* theory =
      app.add_subcommand("theory-check", "Verify the supporting distribution theory");
  theory->add_flag("--fast", tc_fast, "coarse grids and fewer MC draws");
  theory->add_option("--seed", tc_seed, "Monte Carlo seed");
  theory->add_option("--delta", tc_delta, "section radius parameter (default 2.0)");

  // fit
  std::string fit_data;
  bool fit_argmax = false;
  std::uint64_t fit_seed = 1;
  CLI::App* fit = app.add_subcommand(
      "fit", "Nuisance-mean estimates for the unselected groups in a data file");
  fit->add_option("--data", fit_data, "delimited data file")->required();
  fit->add_flag("--argmax", fit_argmax,
                "select the largest value when no row is marked selected");
  fit->add_option("--seed", fit_seed, "seed for the nonparametric estimator");

  CLI11_PARSE(app, argc, argv);

  try {
    if (interval->parsed()) {
      return cmd_interval(data_path, argmax, alpha, seed, oracle_eta);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, seed_opt->count() > 0, sim_seed,
                          alpha_opt->count() > 0, sim_alpha, out_override, threads_flag,
                          fast);
    }
    if (theory->parsed()) {
      return cmd_theory_check(tc_fast, tc_seed, tc_delta);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_data, fit_argmax, fit_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
