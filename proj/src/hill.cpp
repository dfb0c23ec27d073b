#include "ermakov/hill.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "ermakov/errors.hpp"
#include "ermakov/oracle.hpp"

namespace ermakov {

HillBasis catalog_basis(const std::string& family, double param) {
  const TimeFn t = coordinate_fn();
  if (family == "free") {
    return {family, 0.0, constant_fn(0.0, "p"), t.renamed("u1"),
            constant_fn(1.0, "u2"), -1.0};
  }
  if (family == "const_neg") {
    if (param == 0.0) throw std::invalid_argument("const_neg: lambda must be nonzero");
    const double l = param;
    return {family, l, constant_fn(-l * l / 4.0, "p"),
            exp_fn(0.5 * l * t).renamed("u1"), exp_fn(-0.5 * l * t).renamed("u2"), -l};
  }
  if (family == "const_pos") {
    if (param == 0.0) throw std::invalid_argument("const_pos: lambda must be nonzero");
    const double l = param;
    return {family, l, constant_fn(l * l / 4.0, "p"),
            cos_fn(0.5 * l * t).renamed("u1"), sin_fn(0.5 * l * t).renamed("u2"),
            l / 2.0};
  }
  if (family == "ince") {
    if (!(std::fabs(param) < 1.0))
      throw std::invalid_argument("ince: need |alpha| < 1");
    return {family, param, constant_fn(1.0, "p"), cos_fn(t).renamed("u1"),
            sin_fn(t).renamed("u2"), 1.0};
  }
  throw std::invalid_argument("catalog_basis: unknown family '" + family + "'");
}

TimeFn solve_hill(const TimeFn& p, double x0, double v0, Interval range, double tol) {
  Ivp ivp;
  ivp.rhs = [p](double t, const State& y, State& d) {
    d[0] = y[1];
    d[1] = -p.value(t) * y[0];
  };
  ivp.y0 = {x0, v0};
  ivp.t0 = range.lo;
  ivp.t1 = range.hi;
  IntegratorOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  auto curve = std::make_shared<SolutionCurve>(integrate_ivp(ivp, opt));

  return {"hill(" + p.label() + ")", range, [curve, p](double t) {
            const double u = curve->eval(t, 0);
            const double du = curve->eval(t, 1);
            const Jet3 pj = p.jet(t);
            return Jet3{u, du, -pj.f * u, -pj.d1 * u - pj.f * du};
          }};
}

LfReducibility lf_reducibility(const TimeFn& c0, const TimeFn& c1, const TimeFn& c2,
                               const std::vector<double>& grid) {
  LfReducibility out;
  for (double t : grid) {
    const Jet3 j0 = c0.jet(t), j1 = c1.jet(t), j2 = c2.jet(t);
    const double inv = 9.0 * j2.d2 + 18.0 * j2.d1 * j2.f - 27.0 * j1.d1 +
                       4.0 * j2.f * j2.f * j2.f - 18.0 * j1.f * j2.f + 54.0 * j0.f;
    out.max_invariant = std::max(out.max_invariant, std::fabs(inv));
    out.max_c2 = std::max(out.max_c2, std::fabs(j2.f));
    out.max_selfadjoint_defect =
        std::max(out.max_selfadjoint_defect, std::fabs(j1.d1 - 2.0 * j0.f));
  }
  constexpr double tol = 1e-8;
  out.reducible = out.max_invariant <= tol;
  out.formally_selfadjoint = out.max_c2 <= tol && out.max_selfadjoint_defect <= tol;
  return out;
}

double laguerre_forsyth_check(const HillBasis& basis, const Mobius& m, const TimeFn& a,
                              const std::vector<double>& grid) {
  const double det = m.det();
  if (det == 0.0)
    throw std::invalid_argument("laguerre_forsyth_check: singular coefficient matrix");
  const TimeFn den = m.gamma * basis.u1 + m.delta * basis.u2;
  const TimeFn num = m.alpha * basis.u1 + m.beta * basis.u2;
  const TimeFn tbar = num / den;
  const TimeFn abar = (-det * basis.W) * (a / (den * den));

  double worst = 0.0;
  for (double t : grid) {
    if (std::fabs(den.value(t)) < 1e-12)
      throw SingularityError("laguerre_forsyth_check: chart denominator vanishes near t=" +
                             std::to_string(t));
    const Jet3 f = abar.jet(t);
    const Jet3 g = tbar.jet(t);
    // Third derivative of abar with respect to tbar from the order-3 jets.
    const double g1 = g.d1;
    const double d3 = (f.d3 * g1 * g1 - f.d1 * g.d3 * g1 - 3.0 * f.d2 * g1 * g.d2 +
                       3.0 * f.d1 * g.d2 * g.d2) /
                      (g1 * g1 * g1 * g1 * g1);
    worst = std::max(worst, std::fabs(d3));
  }
  return worst;
}

}  // namespace ermakov
