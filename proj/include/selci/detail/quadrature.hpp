#pragma once

// Adaptive Gauss-Legendre quadrature in the log domain.
//
// The integrands here are unnormalized selective densities: a Gaussian bump
// multiplied by a product of Gaussian CDF factors, evaluated as a
// log-integrand that can sit near -1e4 without underflow trouble. Panels are
// accumulated with log-sum-exp; each panel is accepted when a 16-point rule
// and two 8-point half-rules agree in log value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace selci::detail {

inline constexpr double kQuadNegInf = -std::numeric_limits<double>::infinity();

// Nodes/weights for 8- and 16-point Gauss-Legendre rules on [-1,1]
// (positive half; rules are symmetric).
inline constexpr double kGlX8[4] = {0.18343464249564980, 0.52553240991632899,
                                    0.79666647741362674, 0.96028985649753623};
inline constexpr double kGlW8[4] = {0.36268378337836198, 0.31370664587788729,
                                    0.22238103445337447, 0.10122853629037626};
inline constexpr double kGlX16[8] = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
    0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
    0.94457502307323258, 0.98940093499164993};
inline constexpr double kGlW16[8] = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
    0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
    0.06225352393864789, 0.02715245941175409};

inline double log_add(double a, double b) {
  if (a == kQuadNegInf) return b;
  if (b == kQuadNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Single n-point GL panel of exp(log_f) over [a,b], returned as a log value.
template <typename LogF>
double log_panel_gl(LogF&& log_f, double a, double b, const double* x,
                    const double* w, int half_n) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double m = kQuadNegInf;
  double le[16];
  double wt[16];
  int n = 0;
  for (int i = 0; i < half_n; ++i) {
    const double t1 = mid - half * x[i];
    const double t2 = mid + half * x[i];
    le[n] = log_f(t1); wt[n] = w[i]; ++n;
    le[n] = log_f(t2); wt[n] = w[i]; ++n;
  }
  for (int i = 0; i < n; ++i) m = std::max(m, le[i]);
  if (m == kQuadNegInf) return kQuadNegInf;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += wt[i] * std::exp(le[i] - m);
  return m + std::log(s * half);
}

struct LogIntegral {
  double log_value = kQuadNegInf;
  std::size_t nodes_used = 0;
};

// Adaptively integrate exp(log_f) over [a,b]: accept a panel when GL16 agrees
// with the sum of two GL8 halves to within `log_tol` in log value, otherwise
// split. `budget` counts function evaluations; exceeded -> runtime_error.
template <typename LogF>
void log_integrate_adaptive_into(LogF&& log_f, double a, double b,
                                 LogIntegral& acc, std::size_t budget,
                                 double log_tol = 1e-9, int depth = 0) {
  const double coarse = log_panel_gl(log_f, a, b, kGlX16, kGlW16, 8);
  const double mid = 0.5 * (a + b);
  const double left = log_panel_gl(log_f, a, mid, kGlX8, kGlW8, 4);
  const double right = log_panel_gl(log_f, mid, b, kGlX8, kGlW8, 4);
  const double fine = log_add(left, right);
  acc.nodes_used += 32;
  if (acc.nodes_used > budget) {
    throw std::runtime_error("quadrature: node budget exceeded (" +
                             std::to_string(acc.nodes_used) + " nodes)");
  }
  const bool both_floor = (coarse == kQuadNegInf && fine == kQuadNegInf);
  if (both_floor || std::abs(coarse - fine) < log_tol || depth >= 24) {
    acc.log_value = log_add(acc.log_value, fine);
    return;
  }
  log_integrate_adaptive_into(log_f, a, mid, acc, budget, log_tol, depth + 1);
  log_integrate_adaptive_into(log_f, mid, b, acc, budget, log_tol, depth + 1);
}

// Integrate exp(log_f) over [lo,hi] split at `cut`, returning both the mass
// below the cut and the total. One pass serves CDF evaluation: the panel walk
// shares all function evaluations between numerator and denominator.
struct SplitLogIntegral {
  double log_below = kQuadNegInf;
  double log_total = kQuadNegInf;
  std::size_t nodes_used = 0;
};

template <typename LogF>
SplitLogIntegral log_integrate_split(LogF&& log_f, double lo, double cut,
                                     double hi, std::size_t budget = 4096,
                                     double log_tol = 1e-9) {
  if (!(lo <= cut && cut <= hi)) {
    throw std::runtime_error("log_integrate_split: cut outside [lo,hi]");
  }
  SplitLogIntegral out;
  LogIntegral below, above;
  if (cut > lo) log_integrate_adaptive_into(log_f, lo, cut, below, budget, log_tol);
  above.nodes_used = below.nodes_used;
  if (hi > cut) log_integrate_adaptive_into(log_f, cut, hi, above, budget, log_tol);
  out.log_below = below.log_value;
  out.log_total = log_add(below.log_value, above.log_value);
  out.nodes_used = above.nodes_used;
  return out;
}

// Plain (non-log) composite GL16 for ordinary smooth integrands.
template <typename F>
double integrate_gl(F&& f, double a, double b, int panels = 32) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + p * h;
    const double half = 0.5 * h;
    const double mid = pa + half;
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
      s += kGlW16[i] * (f(mid - half * kGlX16[i]) + f(mid + half * kGlX16[i]));
    }
    total += s * half;
  }
  return total;
}

}  // namespace selci::detail
