#include "selci/selective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "selci/detail/quadrature.hpp"
#include "selci/detail/roots.hpp"
#include "selci/rng.hpp"
#include "selci/truncated_normal.hpp"

namespace selci {

namespace {

// Accept a panel when the 16-point and 8-point rules agree in log value.
constexpr double kPanelAgreeTol = 1e-8;

template <typename LogF>
double panel_adaptive(LogF&& f, double a, double b, std::size_t& nodes,
                      std::size_t budget, int depth = 0) {
  const double g16 = detail::log_panel_gl(f, a, b, detail::kGlX16, detail::kGlW16, 8);
  const double g8 = detail::log_panel_gl(f, a, b, detail::kGlX8, detail::kGlW8, 4);
  nodes += 24;
  if (nodes > budget) {
    throw std::runtime_error("selective quadrature: node budget exceeded (" +
                             std::to_string(nodes) + " nodes used, budget " +
                             std::to_string(budget) + ")");
  }
  if ((g16 == -kInf && g8 == -kInf) || std::abs(g16 - g8) < kPanelAgreeTol ||
      depth >= 18) {
    return g16;
  }
  const double mid = 0.5 * (a + b);
  return detail::log_add(panel_adaptive(f, a, mid, nodes, budget, depth + 1),
                         panel_adaptive(f, mid, b, nodes, budget, depth + 1));
}

}  // namespace

SelectiveModel::SelectiveModel(std::vector<double> eta_, std::vector<double> tau_,
                               double sigma_)
    : eta(std::move(eta_)), tau(std::move(tau_)), sigma(sigma_) {
  if (eta.empty() || eta.size() != tau.size()) {
    throw std::domain_error("SelectiveModel: need p >= 1 and matching eta/tau sizes");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error("SelectiveModel: sigma must be finite and > 0");
  }
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (!std::isfinite(eta[j]) || !(tau[j] > 0.0) || !std::isfinite(tau[j])) {
      throw std::domain_error("SelectiveModel: eta finite, tau finite and > 0 required");
    }
  }
}

double SelectedDatum::x_max() const {
  if (x.empty()) throw std::domain_error("SelectedDatum: empty x");
  return *std::max_element(x.begin(), x.end());
}

// ------------------------------------------------------------- PriorTable

PriorTable::PriorTable(const SelectiveModel& m, double lo, double hi, double step)
    : lo_(lo), hi_(hi), step_(step) {
  if (!(step > 0.0) || !(hi > lo)) {
    throw std::domain_error("PriorTable: need hi > lo and step > 0");
  }
  const int n = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
  hi_ = lo_ + step_ * (n - 1);
  s_.resize(n);
  sp_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = lo_ + i * step_;
    double s = 0.0, sp = 0.0;
    for (int j = 0; j < m.p(); ++j) {
      const double z = (t - m.eta[j]) / m.tau[j];
      s += std_normal_log_cdf(z);
      sp += std_normal_cdf_ratio(z) / m.tau[j];
    }
    s_[i] = s;
    sp_[i] = sp;
  }
}

double PriorTable::value(double t) const {
  const double r = (t - lo_) / step_;
  int i = static_cast<int>(r);
  i = std::min(std::max(i, 0), static_cast<int>(s_.size()) - 2);
  const double u = r - i;
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * s_[i] + (u3 - 2.0 * u2 + u) * step_ * sp_[i] +
         (-2.0 * u3 + 3.0 * u2) * s_[i + 1] + (u3 - u2) * step_ * sp_[i + 1];
}

double PriorTable::deriv(double t) const {
  const double r = (t - lo_) / step_;
  int i = static_cast<int>(r);
  i = std::min(std::max(i, 0), static_cast<int>(sp_.size()) - 2);
  const double u = r - i;
  return (1.0 - u) * sp_[i] + u * sp_[i + 1];
}

// -------------------------------------------------------- SelectiveEngine

SelectiveEngine::SelectiveEngine(SelectiveModel model, std::size_t node_budget,
                                 TableMode table_mode)
    : model_(std::move(model)), node_budget_(node_budget) {
  eta_min_ = *std::min_element(model_.eta.begin(), model_.eta.end());
  eta_max_ = *std::max_element(model_.eta.begin(), model_.eta.end());
  tau_max_ = *std::max_element(model_.tau.begin(), model_.tau.end());
  log_sigma_ = std::log(model_.sigma);
  if (table_mode == TableMode::kAuto && model_.p() >= 8) {
    const double tau_min = *std::min_element(model_.tau.begin(), model_.tau.end());
    build_table(eta_min_ - 10.0 * tau_max_ - 2.0 * model_.sigma,
                eta_max_ + 10.0 * tau_max_ + 2.0 * model_.sigma,
                0.02 * std::min(tau_min, model_.sigma));
  }
}

void SelectiveEngine::build_table(double lo, double hi, double step) {
  table_ = std::make_unique<PriorTable>(model_, lo, hi, step);
}

double SelectiveEngine::prior_sum(double t) const {
  if (table_ && table_->covers(t)) return table_->value(t);
  double s = 0.0;
  for (int j = 0; j < model_.p(); ++j) {
    s += std_normal_log_cdf((t - model_.eta[j]) / model_.tau[j]);
  }
  return s;
}

double SelectiveEngine::prior_sum_deriv(double t) const {
  if (table_ && table_->covers(t)) return table_->deriv(t);
  double s = 0.0;
  for (int j = 0; j < model_.p(); ++j) {
    s += std_normal_cdf_ratio((t - model_.eta[j]) / model_.tau[j]) / model_.tau[j];
  }
  return s;
}

double SelectiveEngine::log_integrand(double theta, double t) const {
  const double z = (t - theta) / model_.sigma;
  return -0.5 * z * z - kLogSqrt2Pi - log_sigma_ + prior_sum(t);
}

std::pair<double, double> SelectiveEngine::integration_range(double theta) const {
  const double s = model_.sigma;
  return {std::min(theta - 10.0 * s, eta_min_ - 10.0 * tau_max_),
          std::max(theta + 10.0 * s, eta_max_ + 10.0 * tau_max_)};
}

double SelectiveEngine::peak(double theta) const {
  const auto [lo, hi] = integration_range(theta);
  const double inv_var = 1.0 / (model_.sigma * model_.sigma);
  auto gp = [&](double t) { return -(t - theta) * inv_var + prior_sum_deriv(t); };
  const double flo = gp(lo), fhi = gp(hi);
  if (flo <= 0.0) return lo;
  if (fhi >= 0.0) return hi;
  return detail::brent(gp, lo, hi, flo, fhi, 1e-8 * model_.sigma);
}

double SelectiveEngine::width_at(double t_peak) const {
  const double d = 1e-3 * model_.sigma;
  const double spp =
      (prior_sum_deriv(t_peak + d) - prior_sum_deriv(t_peak - d)) / (2.0 * d);
  const double curv = 1.0 / (model_.sigma * model_.sigma) - std::min(spp, 0.0);
  const double w = 1.0 / std::sqrt(curv);
  return std::min(std::max(w, 0.05 * model_.sigma), model_.sigma);
}

double SelectiveEngine::peak_width(double theta) const { return width_at(peak(theta)); }

SplitMass SelectiveEngine::split_mass(double theta, double cut) const {
  if (std::isnan(theta) || std::isnan(cut)) {
    throw std::domain_error("split_mass: NaN argument");
  }
  const auto [lo, hi] = integration_range(theta);
  const double t_peak = peak(theta);
  const double w = width_at(t_peak);
  auto f = [&](double t) { return log_integrand(theta, t); };

  std::size_t nodes = 0;
  const double wmax = std::max(4.0 * w, 2.0 * model_.sigma);
  const double inv_var = 1.0 / (model_.sigma * model_.sigma);
  // Panel width targeting a bounded log-range per panel: about 2w near the
  // peak (slope ~ 0, capped at wmax) and ~3/|g'| on steep flanks, so the 8-
  // and 16-point rules agree without recursive splitting. Total panel count
  // is then proportional to the total log drop walked, not the distance.
  auto panel_w = [&](double pos) {
    const double slope = std::abs(-(pos - theta) * inv_var + prior_sum_deriv(pos));
    return std::max(std::min(wmax, 3.0 / (slope + 1.5 / w)), 1e-6 * model_.sigma);
  };
  // Panel walks accumulate mass moving away from (or toward) the mode; a
  // walk stops at its limit, once its latest panel is negligible against
  // everything gathered so far (this walk plus `other`) and the run is
  // decreasing (i.e. past the mode), or once a fully-underflowed panel lies
  // on the far side of the mode.
  auto walk_down = [&](double from, double limit, double other) {
    double acc = -kInf, pos = from, prev = kInf;
    while (pos > limit) {
      const double nxt = std::max(pos - panel_w(pos), limit);
      const double pl = panel_adaptive(f, nxt, pos, nodes, node_budget_);
      acc = detail::log_add(acc, pl);
      if ((pl < detail::log_add(acc, other) - 36.0 && pl <= prev) ||
          (pl == -kInf && pos <= t_peak)) {
        break;
      }
      prev = pl;
      pos = nxt;
    }
    return acc;
  };
  auto walk_up = [&](double from, double limit, double other) {
    double acc = -kInf, pos = from, prev = kInf;
    while (pos < limit) {
      const double nxt = std::min(pos + panel_w(pos), limit);
      const double pl = panel_adaptive(f, pos, nxt, nodes, node_budget_);
      acc = detail::log_add(acc, pl);
      if ((pl < detail::log_add(acc, other) - 36.0 && pl <= prev) ||
          (pl == -kInf && pos >= t_peak)) {
        break;
      }
      prev = pl;
      pos = nxt;
    }
    return acc;
  };

  // The below- and above-cut masses are each walked from their own anchor
  // (the cut for the side the cut bounds, the mode for the rest), so a cut
  // far out in one tail never forces panels across the dead zone between the
  // cut and the mode: whatever is skipped there is negligible against the
  // mode's mass, while the near-cut mass is captured exactly by the walk
  // that starts at the cut.
  SplitMass out{};
  if (cut <= lo || cut >= hi) {
    const double down = walk_down(t_peak, lo, -kInf);
    const double up = walk_up(t_peak, hi, down);
    out.log_total = detail::log_add(down, up);
    out.log_below = (cut <= lo) ? -kInf : out.log_total;
  } else if (cut <= t_peak) {
    const double below = walk_down(cut, lo, -kInf);
    const double mid = walk_down(t_peak, cut, below);  // (cut, t_peak]
    const double up = walk_up(t_peak, hi, detail::log_add(below, mid));
    out.log_below = below;
    out.log_total = detail::log_add(below, detail::log_add(mid, up));
  } else {
    const double above = walk_up(cut, hi, -kInf);
    const double down = walk_down(t_peak, lo, above);
    const double mid = walk_up(t_peak, cut, detail::log_add(above, down));
    out.log_below = detail::log_add(down, mid);
    out.log_total = detail::log_add(out.log_below, above);
  }
  out.nodes_used = nodes;
  return out;
}

double SelectiveEngine::log_sel_prob(double theta) const {
  const double t_peak = peak(theta);
  const double v = split_mass(theta, t_peak).log_total;
  return std::min(v, 0.0);  // a probability: clamp log to <= 0
}

double SelectiveEngine::marginal_logpdf(double theta, double y) const {
  const double t_peak = peak(theta);
  const double log_c = split_mass(theta, t_peak).log_total;
  const double z = (y - theta) / model_.sigma;
  double s = 0.0;
  for (int j = 0; j < model_.p(); ++j) {
    s += std_normal_log_cdf((y - model_.eta[j]) / model_.tau[j]);
  }
  return -0.5 * z * z - kLogSqrt2Pi - log_sigma_ + s - log_c;
}

double SelectiveEngine::marginal_cdf(double theta, double y) const {
  const SplitMass sm = split_mass(theta, y);
  if (sm.log_below == -kInf) return 0.0;
  return std::min(1.0, std::exp(sm.log_below - sm.log_total));
}

std::pair<double, double> SelectiveEngine::quantiles(double theta, double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("quantiles: alpha must be in (0,1)");
  }
  const double s = model_.sigma;
  auto solve_q = [&](double q) {
    auto fq = [&](double yy) { return marginal_cdf(theta, yy) - q; };
    return detail::solve_monotone(fq, theta - 6.0 * s, theta + 6.0 * s, true, true,
                                  1e-9 * s);
  };
  const double l = solve_q(0.5 * alpha);
  const double u = solve_q(1.0 - 0.5 * alpha);
  return {l, u};
}

double SelectiveEngine::solve_theta_for_cdf(double y, double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("solve_theta_for_cdf: q must be in (0,1)");
  }
  const double s = model_.sigma;
  // marginal_cdf(theta, y) is strictly decreasing in theta.
  auto f = [&](double th) { return marginal_cdf(th, y) - q; };
  return detail::solve_monotone(f, y - 6.0 * s, y + 6.0 * s, true, true, 1e-9 * s);
}

// ----------------------------------------------------------- free functions

double selection_log_prob(const SelectiveModel& m, double theta) {
  return SelectiveEngine(m, 32768).log_sel_prob(theta);
}

double marginal_selective_logpdf(const SelectiveModel& m, double theta, double y) {
  return SelectiveEngine(m, 32768).marginal_logpdf(theta, y);
}

double marginal_selective_cdf(const SelectiveModel& m, double theta, double y) {
  return SelectiveEngine(m, 32768).marginal_cdf(theta, y);
}

std::pair<double, double> marginal_quantiles(const SelectiveModel& m, double theta,
                                             double alpha) {
  return SelectiveEngine(m, 32768).quantiles(theta, alpha);
}

double conditional_x_logpdf(const SelectiveModel& m, double y,
                            const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.p()) {
    throw std::domain_error("conditional_x_logpdf: x has wrong length");
  }
  double s = 0.0;
  for (int j = 0; j < m.p(); ++j) {
    if (!(x[j] < y)) {
      throw std::domain_error("conditional_x_logpdf: selection constraint violated");
    }
    s += trunc_normal_log_pdf(TruncatedNormal(m.eta[j], m.tau[j], -kInf, y), x[j]);
  }
  return s;
}

std::vector<SelectedDatum> sample_selective(const SelectiveModel& m, double theta,
                                            int n, Rng& rng) {
  if (n < 1) throw std::domain_error("sample_selective: n must be >= 1");
  SelectiveEngine engine(m, 32768);
  MarginalSampler sampler(engine, theta);
  std::vector<SelectedDatum> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sampler.draw(rng));
  return out;
}

// ---------------------------------------------------------- MarginalSampler

MarginalSampler::MarginalSampler(const SelectiveEngine& engine, double theta)
    : engine_(&engine), theta_(theta) {
  const double sigma = engine.model().sigma;
  const double t0 = engine.peak(theta);
  const int n = 2048;
  lo_ = t0 - 10.0 * sigma;
  step_ = 20.0 * sigma / (n - 1);
  std::vector<double> g(n);
  double gmax = -kInf;
  for (int i = 0; i < n; ++i) {
    g[i] = engine.log_integrand(theta, lo_ + i * step_);
    gmax = std::max(gmax, g[i]);
  }
  if (gmax == -kInf) {
    throw std::runtime_error("MarginalSampler: density underflows everywhere");
  }
  cum_.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    cum_[i] = cum_[i - 1] + 0.5 * (std::exp(g[i - 1] - gmax) + std::exp(g[i] - gmax));
  }
  const double total = cum_.back();
  for (double& c : cum_) c /= total;
}

double MarginalSampler::draw_y(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  if (i == 0) i = 1;
  if (i >= cum_.size()) i = cum_.size() - 1;
  const double c0 = cum_[i - 1], c1 = cum_[i];
  const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
  return lo_ + step_ * (static_cast<double>(i - 1) + frac);
}

SelectedDatum MarginalSampler::draw(Rng& rng) const {
  SelectedDatum d;
  d.y = draw_y(rng);
  const SelectiveModel& m = engine_->model();
  d.x.resize(m.p());
  for (int j = 0; j < m.p(); ++j) {
    double xj = trunc_normal_quantile(TruncatedNormal(m.eta[j], m.tau[j], -kInf, d.y),
                                      rng.uniform01());
    if (!(xj < d.y)) xj = std::nextafter(d.y, -kInf);
    d.x[j] = xj;
  }
  return d;
}

}  // namespace selci
