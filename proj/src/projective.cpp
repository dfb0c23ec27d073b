#include "ermakov/projective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ermakov/errors.hpp"

namespace ermakov {

ProjectiveSolution build_a(const HillBasis& basis, const ProjectiveCoeffs& c) {
  if (c.A == 0.0 && c.B == 0.0 && c.C == 0.0)
    throw std::invalid_argument("build_a: coefficients must not all vanish");
  TimeFn a = c.A * (basis.u1 * basis.u1) + (2.0 * c.B) * (basis.u1 * basis.u2) +
             c.C * (basis.u2 * basis.u2);
  const double K = (c.A * c.C - c.B * c.B) * basis.W * basis.W;
  return {basis, c, a.renamed("a"), K};
}

double residual_M(const TimeFn& a, const TimeFn& p, double t) {
  const Jet3 aj = a.jet(t);
  const Jet3 pj = p.jet(t);
  return aj.d3 + 4.0 * pj.f * aj.d1 + 2.0 * pj.d1 * aj.f;
}

double first_integral_K(const TimeFn& a, const TimeFn& p, double t) {
  const Jet3 aj = a.jet(t);
  return 0.25 * (2.0 * aj.f * aj.d2 - aj.d1 * aj.d1) + p.value(t) * aj.f * aj.f;
}

namespace {

void require_positive(const TimeFn& a, double t0, double t) {
  const double lo = std::min(t0, t), hi = std::max(t0, t);
  for (int i = 0; i <= 256; ++i) {
    const double ti = lo + (hi - lo) * i / 256.0;
    if (a.value(ti) <= 0.0)
      throw std::domain_error("s_of_t: positivity of '" + a.label() +
                              "' violated at t=" + std::to_string(ti));
  }
}

}  // namespace

double s_of_t(const TimeFn& a, double t0, double t) {
  require_positive(a, t0, t);
  return integrate(constant_fn(1.0) / a, t0, t, 1e-10);
}

TimeFn s_fn(const TimeFn& a, double t0, Interval dom) {
  return {"s(" + a.label() + ")", dom.intersect(a.domain()), [a, t0](double t) {
            const double s = s_of_t(a, t0, t);
            const Jet3 aj = a.jet(t);
            const double f2 = aj.f * aj.f;
            return Jet3{s, 1.0 / aj.f, -aj.d1 / f2,
                        (2.0 * aj.d1 * aj.d1 - aj.f * aj.d2) / (f2 * aj.f)};
          }};
}

ProjectiveSolution wronskian_pair(const ProjectiveSolution& s1,
                                  const ProjectiveSolution& s2) {
  const HillBasis& basis = s1.basis;
  const double W = basis.W;
  const ProjectiveCoeffs &c1 = s1.coeffs, &c2 = s2.coeffs;
  const ProjectiveCoeffs cw{2.0 * W * (c1.A * c2.B - c2.A * c1.B),
                            W * (c1.A * c2.C - c2.A * c1.C),
                            2.0 * W * (c1.B * c2.C - c2.B * c1.C)};

  const TimeFn a1 = s1.a, a2 = s2.a, p = basis.p;
  TimeFn w{"wronskian(" + a1.label() + "," + a2.label() + ")",
           a1.domain().intersect(a2.domain()), [a1, a2, p](double t) {
             const Jet3 x = a1.jet(t), y = a2.jet(t), pj = p.jet(t);
             // Fourth derivatives close through the equation itself.
             const double x4 = -4.0 * pj.f * x.d2 - 6.0 * pj.d1 * x.d1 - 2.0 * pj.d2 * x.f;
             const double y4 = -4.0 * pj.f * y.d2 - 6.0 * pj.d1 * y.d1 - 2.0 * pj.d2 * y.f;
             return Jet3{x.f * y.d1 - y.f * x.d1, x.f * y.d2 - y.f * x.d2,
                         x.d1 * y.d2 - y.d1 * x.d2 + x.f * y.d3 - y.f * x.d3,
                         2.0 * (x.d1 * y.d3 - y.d1 * x.d3) + x.f * y4 - y.f * x4};
           }};
  const double K = (cw.A * cw.C - cw.B * cw.B) * W * W;
  return {basis, cw, w, K};
}

TimeFn projective_derivative(const ProjectiveSolution& s) {
  return {"d(" + s.a.label() + ")", s.a.domain(), [a = s.a, p = s.basis.p](double t) {
            const Jet3 aj = a.jet(t), pj = p.jet(t);
            const double a4 =
                -4.0 * pj.f * aj.d2 - 6.0 * pj.d1 * aj.d1 - 2.0 * pj.d2 * aj.f;
            return Jet3{aj.d1, aj.d2, aj.d3, a4};
          }};
}

ProjectiveCoeffs coeffs_from_values(const HillBasis& basis, double t0, double a0,
                                    double da0, double dda0) {
  const Jet3 u = basis.u1.jet(t0), v = basis.u2.jet(t0);
  // Rows: value, first and second derivative of (u1^2, 2 u1 u2, u2^2).
  // The determinant is 4 W^3, so the system never degenerates.
  const double m[3][3] = {
      {u.f * u.f, 2.0 * u.f * v.f, v.f * v.f},
      {2.0 * u.f * u.d1, 2.0 * (u.d1 * v.f + u.f * v.d1), 2.0 * v.f * v.d1},
      {2.0 * (u.d1 * u.d1 + u.f * u.d2),
       2.0 * (u.d2 * v.f + 2.0 * u.d1 * v.d1 + u.f * v.d2),
       2.0 * (v.d1 * v.d1 + v.f * v.d2)}};
  const double rhs[3] = {a0, da0, dda0};

  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double D = det3(m);
  if (std::fabs(D) < 1e-14 * (1.0 + std::fabs(a0)))
    throw NumericalError("coeffs_from_values: degenerate system (W should be nonzero)");

  double sol[3];
  for (int k = 0; k < 3; ++k) {
    double mk[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mk[i][j] = (j == k) ? rhs[i] : m[i][j];
    sol[k] = det3(mk) / D;
  }
  return {sol[0], sol[1], sol[2]};
}

}  // namespace ermakov
