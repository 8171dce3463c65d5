#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "selci/detail/quadrature.hpp"
#include "selci/gauss.hpp"

using namespace selci;

TEST_CASE("standard normal cdf basics") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(std_normal_cdf(1.96) - 0.975) < 1e-4);
  CHECK(std_normal_cdf(-1.0) + std_normal_cdf(1.0) == doctest::Approx(1.0));
  // cdf + sf = 1 to 1e-15 relative across the central range.
  for (double z = -8.0; z <= 8.0; z += 0.25) {
    CHECK(std::abs(std_normal_cdf(z) + std_normal_sf(z) - 1.0) < 1e-15);
  }
  CHECK_THROWS_AS(std_normal_cdf(kNaN), std::domain_error);
  CHECK_THROWS_AS(std_normal_log_sf(kNaN), std::domain_error);
}

TEST_CASE("log survival function deep-tail frozen values") {
  // Frozen against a high-precision continued-fraction evaluation.
  const struct {
    double z, expect;
  } cases[] = {
      {10.0, -53.231285150512477},
      {30.0, -454.32124395634327},
      {40.0, -804.60844201375392},
  };
  for (const auto& c : cases) {
    CHECK(std::abs(std_normal_log_sf(c.z) - c.expect) <
          1e-12 * std::abs(c.expect));
  }
  // Symmetry: log_cdf(z) = log_sf(-z).
  CHECK(std_normal_log_cdf(-10.0) == std_normal_log_sf(10.0));
  // Infinite arguments resolve to the limiting probabilities.
  CHECK(std_normal_log_cdf(kInf) == 0.0);
  CHECK(std_normal_log_sf(kInf) == -kInf);
}

TEST_CASE("quantile inverts the cdf") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double u = 0.0005; u < 1.0; u += 0.0117) {
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(u)) - u) < 1e-12);
  }
  // Deep-tail round trips through the log-domain survival function.
  for (double z = -5.0; z <= 40.0; z += 1.5) {
    const double back = std_normal_isf_from_log(std_normal_log_sf(z));
    CHECK(std::abs(back - z) < 1e-9 * std::max(1.0, std::abs(z)));
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("multiplicity-adjusted quantile constants") {
  // Half-widths quoted for p = 50 at alpha = 0.05 and the relaxed level.
  CHECK(std::abs(std_normal_quantile(1.0 - 0.05 / (2 * 50)) -
                 3.2905267314919255) < 1e-12);
  CHECK(std::abs(std_normal_quantile(1.0 - 0.005 / (2 * 50)) -
                 3.8905918864131204) < 1e-12);
}

TEST_CASE("chi-square(3) cdf closed form vs quadrature") {
  CHECK(chi2_3_cdf(0.0) == 0.0);
  CHECK(std::abs(chi2_3_cdf(4.0) - 0.73853587005088883) < 1e-12);
  CHECK(std::abs(chi2_3_cdf(0.25) - 0.030859595783726757) < 1e-12);
  CHECK_THROWS_AS(chi2_3_cdf(-1.0), std::domain_error);

  // Quadrature oracle: density sqrt(x) e^{-x/2} / sqrt(2 pi) on [0, x],
  // integrated after the substitution x = u^2 (which removes the sqrt cusp
  // at the origin): integrand becomes 2 u^2 phi(u).
  auto smoothed = [](double u) {
    return 2.0 * u * u * std::exp(-0.5 * u * u - kLogSqrt2Pi);
  };
  double prev = 0.0;
  for (double x = 2.5; x <= 50.0 + 1e-9; x += 2.5) {
    const double quad = detail::integrate_gl(smoothed, 0.0, std::sqrt(x), 64);
    const double closed = chi2_3_cdf(x);
    CHECK(std::abs(quad - closed) < 1e-10);
    CHECK(closed > prev);  // strictly increasing on this grid
    prev = closed;
  }
  CHECK(chi2_3_cdf(1e4) == doctest::Approx(1.0).epsilon(1e-14));

  // Tail envelope: the survival function decays like x^{3/2} e^{-x/2}.
  for (double x : {10.0, 20.0, 30.0, 40.0}) {
    CHECK(1.0 - chi2_3_cdf(x) <= 2.0 * std::pow(x, 1.5) * std::exp(-0.5 * x));
  }
}

TEST_CASE("Mill's ratio frozen values and strict sandwich") {
  CHECK(std::abs(mills_ratio(1.0) - 0.65567954241879856) < 1e-12);
  CHECK(std::abs(mills_ratio(10.0) - 0.099028596471731178) < 1e-12);
  // Limiting value at 0+ is sqrt(pi/2).
  CHECK(std::abs(mills_ratio(1e-12) - 1.2533141373155001) < 1e-6);

  // x/(1+x^2) < ratio < 1/x strictly over a wide grid.
  std::vector<double> grid;
  for (double x = 0.01; x <= 40.0; x *= 1.13) grid.push_back(x);
  grid.push_back(40.0);
  for (double x : grid) {
    const MillsBounds b = mills_ratio_bounds(x);
    CHECK(b.lower < b.ratio);
    CHECK(b.ratio < b.upper);
    CHECK(b.lower == doctest::Approx(x / (1.0 + x * x)).epsilon(1e-14));
    CHECK(b.upper == doctest::Approx(1.0 / x).epsilon(1e-14));
  }
}

TEST_CASE("cdf ratio is stable in both tails") {
  // phi/Phi: ~ -z in the far left tail, -> 0 in the right tail.
  CHECK(std::abs(std_normal_cdf_ratio(-50.0) - 50.0) < 0.03);
  CHECK(std_normal_cdf_ratio(8.0) < 1e-10);
  // Against the Mill's ratio of the mirrored tail: phi(z)/Phi(z) =
  // 1/mills(-z) for z < 0.
  for (double z = -30.0; z <= -0.5; z += 0.7) {
    CHECK(std_normal_cdf_ratio(z) ==
          doctest::Approx(1.0 / mills_ratio(-z)).epsilon(1e-10));
  }
}
