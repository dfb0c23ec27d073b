#pragma once

#include "ermakov/hill.hpp"
#include "ermakov/timefn.hpp"

namespace ermakov {

/// Coefficients of a = A u1^2 + 2B u1 u2 + C u2^2. Not all zero.
struct ProjectiveCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
};

/// A solution of the third-order equation a''' + 4 p a' + 2 p' a = 0 built by
/// superposition over a Hill basis, together with its first integral
/// K = (1/4)(2 a a'' - a'^2) + p a^2 = (AC - B^2) W^2.
struct ProjectiveSolution {
  HillBasis basis;
  ProjectiveCoeffs coeffs;
  TimeFn a;
  double K = 0.0;
};

ProjectiveSolution build_a(const HillBasis& basis, const ProjectiveCoeffs& c);

/// Residual a''' + 4 p a' + 2 p' a at t.
double residual_M(const TimeFn& a, const TimeFn& p, double t);

/// First integral (1/4)(2 a a'' - a'^2) + p a^2 at t.
double first_integral_K(const TimeFn& a, const TimeFn& p, double t);

/// s(t) = int_{t0}^{t} dt'/a(t'). Requires a > 0 between t0 and t; violation
/// (detected by a 257-point sample plus the endpoints) throws
/// std::domain_error.
double s_of_t(const TimeFn& a, double t0, double t);

/// Same quadrature packaged as a TimeFn on dom with derivative channels
/// s' = 1/a, s'' = -a'/a^2, s''' = (2a'^2 - a a'')/a^3.
TimeFn s_fn(const TimeFn& a, double t0, Interval dom);

/// Wronskian w = a1 a2' - a2 a1' of two solutions over a shared basis; itself
/// a solution, with coefficients (2W(A1B2-A2B1), W(A1C2-A2C1), 2W(B1C2-B2C1)).
/// Derivative channels close through a'''' = -4 p a'' - 6 p' a' - 2 p'' a.
ProjectiveSolution wronskian_pair(const ProjectiveSolution& s1,
                                  const ProjectiveSolution& s2);

/// Solves the 3x3 linear system fitting (A, B, C) to a(t0), a'(t0), a''(t0).
/// The system matrix has determinant 2 W^3 != 0, so this never degenerates.
ProjectiveCoeffs coeffs_from_values(const HillBasis& basis, double t0, double a0,
                                    double da0, double dda0);

/// a' as a TimeFn whose top channel closes through the equation:
/// a'''' = -4 p a'' - 6 p' a' - 2 p'' a.
TimeFn projective_derivative(const ProjectiveSolution& s);

}  // namespace ermakov
