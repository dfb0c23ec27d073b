#pragma once

#include <string>
#include <vector>

#include "ermakov/timefn.hpp"

namespace ermakov {

/// Fundamental set (u1, u2) of u'' + p(t) u = 0 with constant Wronskian
/// W = u1 u2' - u2 u1' != 0. All members carry exact order-3 jets.
struct HillBasis {
  std::string family;
  double param = 0.0;
  TimeFn p;
  TimeFn u1;
  TimeFn u2;
  double W = 0.0;
};

/// Analytic catalog:
///   free            p = 0,       u1 = t,          u2 = 1,          W = -1
///   const_neg(l)    p = -l^2/4,  u1 = e^{lt/2},   u2 = e^{-lt/2},  W = -l
///   const_pos(l)    p = l^2/4,   u1 = cos(lt/2),  u2 = sin(lt/2),  W = l/2
///   ince(alpha)     p = 1,       u1 = cos t,      u2 = sin t,      W = 1
/// const_* require l != 0; ince requires |alpha| < 1 (the parameter feeds the
/// coefficient pattern (1+alpha, 0, 1-alpha) used by callers).
HillBasis catalog_basis(const std::string& family, double param = 0.0);

/// Numerical solution of u'' + p u = 0 from u(range.lo) = x0, u'(range.lo) = v0.
/// The returned TimeFn evaluates through the integrator's dense output; its
/// derivative channels are u' from the state, u'' = -p u, and
/// u''' = -p' u - p u' (no finite differences on interpolants).
TimeFn solve_hill(const TimeFn& p, double x0, double v0, Interval range,
                  double tol = 1e-10);

struct LfReducibility {
  double max_invariant = 0.0;          // max |9c2''+18c2'c2-27c1'+4c2^3-18c1c2+54c0|
  double max_c2 = 0.0;                 // max |c2|
  double max_selfadjoint_defect = 0.0; // max |c1' - 2 c0|
  bool reducible = false;              // invariant vanishes on the grid
  bool formally_selfadjoint = false;   // c2 = 0 and c1' = 2 c0 on the grid
};

/// Relative invariant of y''' + c2 y'' + c1 y' + c0 y = 0 under point
/// transformations, evaluated on the grid. A vanishing invariant marks the
/// equations reducible to the canonical form y''' = 0.
LfReducibility lf_reducibility(const TimeFn& c0, const TimeFn& c1, const TimeFn& c2,
                               const std::vector<double>& grid);

struct Mobius {
  double alpha = 1.0, beta = 0.0, gamma = 0.0, delta = 1.0;
  double det() const { return alpha * delta - beta * gamma; }
};

/// Transports a(t) to the chart tbar = (alpha u1 + beta u2)/(gamma u1 + delta u2),
/// abar = -det * W * (gamma u1 + delta u2)^{-2} * a, and returns the grid max of
/// |d^3 abar / d tbar^3| (chain rule on analytic t-derivatives). Zero, up to
/// roundoff, exactly when a solves a''' + 4 p a' + 2 p' a = 0.
double laguerre_forsyth_check(const HillBasis& basis, const Mobius& m, const TimeFn& a,
                              const std::vector<double>& grid);

}  // namespace ermakov
