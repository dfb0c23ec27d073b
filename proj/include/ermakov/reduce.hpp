#pragma once

#include <utility>

#include "ermakov/invariant_eqs.hpp"
#include "ermakov/oracle.hpp"
#include "ermakov/projective.hpp"
#include "ermakov/timefn.hpp"

namespace ermakov {

/// Image of a second-order jet under the canonical chart: R = dr/ds,
/// R2 = d2r/ds2.
struct ChartJet {
  double s = 0.0, r = 0.0, R = 0.0, R2 = 0.0;
};

/// Canonical coordinates attached to a projective solution a > 0:
/// s = int dt/a from the anchor, r = a^{2/(n-1)} x (r = x/sqrt(a) at n = -3).
/// Transports second-order data both ways; the t(s) inversion is by Newton
/// iteration on the strictly increasing s(t).
class CanonicalChart {
 public:
  CanonicalChart(ProjectiveSolution asol, double n, double t0);

  double n() const { return n_; }
  double anchor() const { return t0_; }
  const ProjectiveSolution& asol() const { return asol_; }

  double s_of(double t) const;
  double t_of(double s) const;
  std::pair<double, double> forward(double t, double x) const;   // (s, r)
  std::pair<double, double> backward(double s, double r) const;  // (t, x)
  ChartJet transport(double t, double x, double xdot, double xddot) const;
  /// xdot recovered from (t, x, R); inverse of the first-order transport.
  double velocity_from_R(double t, double x, double R) const;
  /// xddot recovered from (t, x, xdot, R2); inverse of the second-order one.
  double acceleration_from_R2(double t, double x, double xdot, double R2) const;

 private:
  ProjectiveSolution asol_;
  double n_, t0_, mt_;  // mt_ = 2/(n-1), the a-exponent of the chart
};

CanonicalChart canonical_maps(const ProjectiveSolution& a, double n, double t0 = 0.0);

/// First-order invariant in chart coordinates:
/// omega = ((1-n)/4) r^{-(n+1)/2} R (equals r R at n = -3).
double canonical_omega(double n, double r, double R);

/// The transported equation r'' = ((n+3)/4) R^2/r + r^n H(omega); no s
/// dependence survives the chart.
double canonical_rhs(const HFunction& H, double n, double r, double R);

/// The reduced 1-D flow d(omega)/d(xi) = ((1-n)/4) omega
/// + ((1-n)^2/16) H(omega)/omega, xi = ln r.
double separable_rhs(const HFunction& H, double n, double omega);

struct ReducedSolution {
  SolutionCurve r;                 // r(s), single component
  double max_defect = 0.0;         // first-order defect between nodes
  bool hit_turning_point = false;  // stopped where omega reaches 0
};

/// Two-stage quadrature pipeline: integrates the separable flow in
/// (xi = ln r, omega) from omega0 = ((1-n)/4) r0^{-(n+1)/2} R0, then the
/// scalar equation dr/ds = (4/(1-n)) r^{(n+1)/2} omega(ln r). An omega = 0
/// crossing stops both stages (turning points are reported, not folded
/// through). omega0 = 0 with H(0) != 0 is a singular start; with H(0) = 0
/// the constant curve r = r0 is returned.
ReducedSolution separable_solve(const HFunction& H, double n, double r0, double R0,
                                double s0, double s1, double tol = 1e-9);

/// Full pipeline for the a-based families: transport the initial data through
/// the chart anchored at t0, solve the reduced equation, map back. The result
/// carries analytic first derivatives via the chart and closes its second
/// derivative through the equation itself.
TimeFn quadrature_solve(const EquationSpec& spec, double t0, double x0, double v0,
                        double t1, double tol = 1e-9);

}  // namespace ermakov
