#pragma once

// Bracketed scalar root finding used throughout the library. Every solve in
// this project starts from an analytically guaranteed (or expanded) bracket,
// so Brent's method with a bisection fallback is always applicable.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace selci::detail {

// Brent's method on [a,b] with fa = f(a), fb = f(b) of opposite signs.
// Returns the abscissa once the bracket width falls below
// xtol + rtol*|x| or f hits exactly zero.
template <typename F>
double brent(F&& f, double a, double b, double fa, double fb,
             double xtol = 1e-13, double rtol = 4e-16, int max_iter = 200) {
  if (std::isnan(fa) || std::isnan(fb)) {
    throw std::runtime_error("brent: NaN at bracket endpoint");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw std::runtime_error("brent: endpoints do not bracket a root");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * rtol * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;  // bisection
    } else {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;  // accept interpolation
      } else {
        d = m; e = m;  // fall back to bisection
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw std::runtime_error("brent: NaN during iteration");
    if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

// Expand [lo,hi] geometrically until f changes sign across it, then return
// {lo, hi, f(lo), f(hi)}. `grow_low`/`grow_high` select which end may move.
// Used where monotonicity guarantees a root exists but its scale is unknown
// (e.g. interval endpoints hundreds of sigma into a tail).
struct Bracket {
  double lo, hi, flo, fhi;
};

template <typename F>
Bracket expand_bracket(F&& f, double lo, double hi, bool grow_low = true,
                       bool grow_high = true, int max_expand = 200) {
  double flo = f(lo), fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) {
    throw std::runtime_error("expand_bracket: NaN at starting point");
  }
  double step = hi - lo;
  for (int i = 0; i < max_expand; ++i) {
    if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0)) {
      return {lo, hi, flo, fhi};
    }
    step *= 2.0;
    if (grow_low && grow_high) {
      lo -= step; hi += step;
      flo = f(lo); fhi = f(hi);
    } else if (grow_low) {
      hi = lo; fhi = flo;
      lo -= step; flo = f(lo);
    } else if (grow_high) {
      lo = hi; flo = fhi;
      hi += step; fhi = f(hi);
    } else {
      break;
    }
    if (std::isnan(flo) || std::isnan(fhi)) {
      throw std::runtime_error("expand_bracket: NaN during expansion");
    }
  }
  throw std::runtime_error("expand_bracket: no sign change found");
}

// Convenience: root of f on an expanded bracket seeded by [lo,hi].
template <typename F>
double solve_monotone(F&& f, double lo, double hi, bool grow_low = true,
                      bool grow_high = true, double xtol = 1e-13) {
  Bracket br = expand_bracket(f, lo, hi, grow_low, grow_high);
  return brent(f, br.lo, br.hi, br.flo, br.fhi, xtol);
}

}  // namespace selci::detail
