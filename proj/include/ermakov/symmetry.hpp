#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ermakov/projective.hpp"
#include "ermakov/timefn.hpp"

namespace ermakov {

/// Value and partial derivatives of one vector-field component at (t, x).
struct FieldJet {
  double v = 0.0;
  double t = 0.0, x = 0.0;
  double tt = 0.0, tx = 0.0, xx = 0.0;
};

using FieldFn = std::function<FieldJet(double t, double x)>;

/// X = xi(t,x) d/dt + eta(t,x) d/dx with analytic partials.
struct PointVectorField {
  std::string label;
  FieldFn xi;
  FieldFn eta;
};

/// Second-order equation in normal form xddot = F(t, x, xdot), with the
/// partials needed by the symmetry condition and a domain predicate
/// (the singular locus x = 0 is excluded by most families here).
struct OdeJet {
  double F = 0.0;
  double Ft = 0.0, Fx = 0.0, Fdx = 0.0;
};

struct ODE2 {
  std::string label;
  std::function<OdeJet(double t, double x, double xdot)> F;
  std::function<bool(double t, double x)> in_domain = [](double, double) {
    return true;
  };
};

/// First and second prolongation coefficients of X at the jet
/// (t, x, xdot, xddot):
///   eta1 = eta_t + (eta_x - xi_t) xdot - xi_x xdot^2
///   eta2 = eta_tt + (2 eta_tx - xi_tt) xdot + (eta_xx - 2 xi_xt) xdot^2
///          - xi_xx xdot^3 + (eta_x - 2 xi_t) xddot - 3 xi_x xdot xddot
std::pair<double, double> prolong2(const PointVectorField& X, double t, double x,
                                   double xdot, double xddot);

/// Lie-symmetry defect of X on the equation: with xddot := F(t,x,xdot),
/// returns eta2 - xi F_t - eta F_x - eta1 F_xdot. Zero on a grid certifies
/// the symmetry numerically.
double symmetry_residual(const PointVectorField& X, const ODE2& ode, double t,
                         double x, double xdot);

/// Components of [X, Y] at (t, x), from the stored first partials.
std::pair<double, double> lie_bracket(const PointVectorField& X,
                                      const PointVectorField& Y, double t, double x);

/// Field of the separable shape xi = f(t), eta = g(t) x, which covers every
/// generator constructed here; partials come from the jets of f and g.
PointVectorField scaled_field(const TimeFn& f, const TimeFn& g, std::string label);

/// x d/dx.
PointVectorField dilation_field();

struct GeneratorParams {
  double beta = 0.5;     // coefficient of x d/dx in the second affine generator
  double n = -3.0;       // exponent of the transformed equation, n != 1
  TimeFn r;              // damping coefficient of the transformed equation
  double s_anchor = 0.0; // lower limit of the s(t) quadrature
};

/// Generators attached to a projective solution a(t):
///   ep_field    -> { X1 = a d/dt + (a'/2) x d/dx }
///   affine_pair -> { X1, X2 = s X1 + beta x d/dx },   s(t) = int dt'/a
///   sl2_triple  -> { X1, X2 (beta = 1/2), X3 = a s^2 d/dt + ((a' s^2 + 2s)/2) x d/dx }
///   d2ks_field  -> { a d/dt + (2/(1-n)) (a' - a r) w d/dw }
/// Fields needing s evaluate the quadrature lazily; positivity of a is
/// enforced there and surfaces as std::domain_error.
std::vector<PointVectorField> make_generators(const std::string& kind,
                                              const ProjectiveSolution& a,
                                              const GeneratorParams& params = {});

/// Max relative discrepancy between stored partials and central finite
/// differences of the value channels over the (ts, xs) grid.
double check_partials(const PointVectorField& X, const std::vector<double>& ts,
                      const std::vector<double>& xs, double h = 1e-5);

}  // namespace ermakov
