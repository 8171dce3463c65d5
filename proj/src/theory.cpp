#include "selci/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "selci/detail/quadrature.hpp"
#include "selci/gauss.hpp"
#include "selci/rng.hpp"
#include "selci/selective.hpp"
#include "selci/truncated_normal.hpp"

namespace selci {

double prob_B(double eta, double delta) {
  if (!(eta >= 0.0) || !std::isfinite(eta) || !(delta > 0.0) || !std::isfinite(delta)) {
    throw std::domain_error("prob_B: requires eta >= 0 and delta > 0, both finite");
  }
  // Rotate 45 degrees: with s along the selection boundary and t across it,
  // the event becomes {t >= a, s^2 + t^2 <= R^2}, a = eta/sqrt(2),
  // R^2 = a^2 + delta^2, both coordinates standard normal. Integrating out t,
  //   P = 2 * int_0^delta phi(s) [Phi(sqrt(R^2 - s^2)) - Phi(a)] ds,
  // then divide by the selection probability Phi(-a). The substitution
  // s = delta sin(u) removes the square-root derivative singularity at
  // s = delta.
  const double a = eta / kSqrt2;
  const double r2 = a * a + delta * delta;
  const double log_sel = std_normal_log_sf(a);
  auto integrand = [&](double u) {
    const double s = delta * std::sin(u);
    const double upper = std::sqrt(std::max(r2 - s * s, 0.0));
    if (upper <= a) return 0.0;
    const double log_band = log_normal_mass(a, upper) - log_sel;
    return 2.0 * std_normal_pdf(s) * std::exp(log_band) * delta * std::cos(u);
  };
  constexpr double kHalfPi = 1.5707963267948966;
  return detail::integrate_gl(integrand, 0.0, kHalfPi, 32);
}

McEstimate prob_Bstar(double theta, double r, int n, Rng& rng) {
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(theta) || n < 1) {
    throw std::domain_error("prob_Bstar: requires finite theta, r > 0, n >= 1");
  }
  const double lo = std::min(theta, 0.0);
  const double rad2 = 0.5 * lo * lo + r * r;

  SelectiveModel m({0.0}, {1.0}, 1.0);
  SelectiveEngine engine(m, 32768);
  MarginalSampler sampler(engine, theta);

  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const SelectedDatum d = sampler.draw(rng);
    const double x = d.x[0];
    const double dy = d.y - theta;
    if (x * x + dy * dy <= rad2) ++hits;
  }
  McEstimate out;
  out.value = static_cast<double>(hits) / n;
  out.se = std::sqrt(std::max(out.value * (1.0 - out.value), 0.0) / n);
  return out;
}

double z_offset(double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0) || !std::isfinite(x)) {
    throw std::domain_error("z_offset: requires finite x and alpha in (0,1)");
  }
  return std_normal_isf_from_log(std::log(alpha) + std_normal_log_sf(x)) - x;
}

CEtaCheck c_eta_check(double eta) {
  if (!std::isfinite(eta)) throw std::domain_error("c_eta_check: eta must be finite");
  CEtaCheck out;
  out.quadrature = std::exp(selection_log_prob(SelectiveModel({eta}, {1.0}, 1.0), 0.0));
  out.closed_form = std_normal_sf(eta / kSqrt2);
  return out;
}

}  // namespace selci
