#pragma once

// Numerical verification of the distribution-theory facts the interval
// procedures rest on: probabilities of circular sections under the selection
// model, the tail-offset function behind the width-divergence results, and
// the closed form of the p=1 selection probability.

namespace selci {

class Rng;

// P of the circular section {(x,y): x <= y, (x-eta)^2 + y^2 <= eta^2/2 +
// delta^2} under the selective model with unselected mean eta and selected
// mean 0 (unit scales), via quadrature of the one-dimensional reduction.
// Accurate to ~1e-8; requires eta >= 0, delta > 0.
double prob_B(double eta, double delta);

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Monte Carlo probability of the shifted circular section {(x,y): x <= y,
// x^2 + (y-theta)^2 <= (min(theta,0))^2/2 + r^2} under the selective model
// with unselected mean 0 and selected mean theta.
McEstimate prob_Bstar(double theta, double r, int n, Rng& rng);

// The z >= 0 solving sf(x + z) = alpha * sf(x): how much further into the
// tail one must go to cut the tail mass by the factor alpha. Closed-form via
// the log-domain inverse survival function; decreasing in x, -> 0 as
// x -> inf.
double z_offset(double x, double alpha);

struct CEtaCheck {
  double quadrature;    // selection probability by quadrature
  double closed_form;   // Phi(-eta/sqrt(2))
};

// p=1, unit-scale selection probability with unselected mean eta and
// selected mean 0, from quadrature and from the closed form.
CEtaCheck c_eta_check(double eta);

}  // namespace selci
