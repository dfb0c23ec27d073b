#include "ermakov/reduce.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "ermakov/errors.hpp"

namespace ermakov {

CanonicalChart::CanonicalChart(ProjectiveSolution asol, double n, double t0)
    : asol_(std::move(asol)), n_(n), t0_(t0), mt_(2.0 / (n - 1.0)) {
  if (n == 1.0) throw std::invalid_argument("canonical chart: n = 1 is excluded");
}

double CanonicalChart::s_of(double t) const { return s_of_t(asol_.a, t0_, t); }

double CanonicalChart::t_of(double s) const {
  // s(t) is strictly increasing with ds/dt = 1/a, so Newton steps are
  // t <- t - (s(t) - s) a(t). Steps that leave the a > 0 region are halved
  // back into it; the residual bottoms out at the quadrature noise of s(t),
  // so keep the best iterate seen.
  double t = t0_;
  double s_cur = 0.0;
  double best_t = t, best = std::fabs(s);
  for (int it = 0; it < 60; ++it) {
    if (best <= 1e-12 * (1.0 + std::fabs(s))) return best_t;
    double dt = (s - s_cur) * asol_.a.value(t);
    bool moved = false;
    for (int k = 0; k < 60 && !moved; ++k) {
      try {
        const double s_next = s_of(t + dt);
        t += dt;
        s_cur = s_next;
        moved = true;
      } catch (const std::domain_error&) {
        dt *= 0.5;
      }
    }
    if (!moved) break;
    if (std::fabs(s_cur - s) < best) {
      best = std::fabs(s_cur - s);
      best_t = t;
    }
  }
  if (best <= 1e-8 * (1.0 + std::fabs(s))) return best_t;
  throw ConvergenceError("chart inversion t(s) did not converge at s=" +
                         std::to_string(s));
}

std::pair<double, double> CanonicalChart::forward(double t, double x) const {
  const double a = asol_.a.value(t);
  if (a <= 0.0)
    throw std::domain_error("chart: a(t) <= 0 at t=" + std::to_string(t));
  return {s_of(t), std::pow(a, mt_) * x};
}

std::pair<double, double> CanonicalChart::backward(double s, double r) const {
  const double t = t_of(s);
  const double a = asol_.a.value(t);
  if (a <= 0.0)
    throw std::domain_error("chart: a(t) <= 0 at t=" + std::to_string(t));
  return {t, std::pow(a, -mt_) * r};
}

ChartJet CanonicalChart::transport(double t, double x, double xdot,
                                   double xddot) const {
  const Jet3 aj = asol_.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("chart: a(t) <= 0 at t=" + std::to_string(t));
  const double am = std::pow(aj.f, mt_);
  const double r = am * x;
  const double r_t = mt_ * am / aj.f * aj.d1 * x + am * xdot;
  const double r_tt = mt_ * (mt_ - 1.0) * am / (aj.f * aj.f) * aj.d1 * aj.d1 * x +
                      mt_ * am / aj.f * aj.d2 * x +
                      2.0 * mt_ * am / aj.f * aj.d1 * xdot + am * xddot;
  ChartJet out;
  out.s = s_of(t);
  out.r = r;
  out.R = aj.f * r_t;
  out.R2 = aj.f * (aj.d1 * r_t + aj.f * r_tt);
  return out;
}

double CanonicalChart::velocity_from_R(double t, double x, double R) const {
  const Jet3 aj = asol_.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("chart: a(t) <= 0 at t=" + std::to_string(t));
  const double am = std::pow(aj.f, mt_);
  return R / (am * aj.f) - mt_ * (aj.d1 / aj.f) * x;
}

double CanonicalChart::acceleration_from_R2(double t, double x, double xdot,
                                            double R2) const {
  const Jet3 aj = asol_.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("chart: a(t) <= 0 at t=" + std::to_string(t));
  const double am = std::pow(aj.f, mt_);
  const double r_t = mt_ * am / aj.f * aj.d1 * x + am * xdot;
  const double r_tt = (R2 / aj.f - aj.d1 * r_t) / aj.f;
  return (r_tt - mt_ * (mt_ - 1.0) * am / (aj.f * aj.f) * aj.d1 * aj.d1 * x -
          mt_ * am / aj.f * aj.d2 * x - 2.0 * mt_ * am / aj.f * aj.d1 * xdot) /
         am;
}

CanonicalChart canonical_maps(const ProjectiveSolution& a, double n, double t0) {
  return CanonicalChart(a, n, t0);
}

double canonical_omega(double n, double r, double R) {
  if (r <= 0.0)
    throw std::domain_error("canonical_omega: r <= 0");
  return (1.0 - n) / 4.0 * std::pow(r, -(n + 1.0) / 2.0) * R;
}

double canonical_rhs(const HFunction& H, double n, double r, double R) {
  if (r <= 0.0)
    throw std::domain_error("canonical_rhs: r <= 0");
  return (n + 3.0) / 4.0 * R * R / r + std::pow(r, n) * H(canonical_omega(n, r, R));
}

double separable_rhs(const HFunction& H, double n, double omega) {
  const double c = (1.0 - n) / 4.0;
  return c * omega + c * c * H(omega) / omega;
}

namespace {

// Piecewise evaluation of the stage-1 result: two legs share the anchor xi0;
// outside the computed range the end value is frozen (the boundary events of
// stage 2 stop the integration a margin before the clamp matters).
struct OmegaTable {
  SolutionCurve fwd, bwd;
  double xi0;
  double lo() const { return bwd.times().front(); }
  double hi() const { return fwd.times().back(); }
  double eval(double xi) const {
    if (xi < lo()) return bwd.states().front()[0];
    if (xi > hi()) return fwd.states().back()[0];
    return xi >= xi0 ? fwd.eval(xi) : bwd.eval(xi);
  }
};

SolutionCurve constant_curve(double s0, double s1, double r0) {
  const double mid = 0.5 * (s0 + s1);
  std::vector<double> t{s0, mid, s1};
  if (s1 < s0) t = {s1, mid, s0};
  const std::vector<State> y(3, State{r0}), dy(3, State{0.0});
  return SolutionCurve(t, y, dy, CurveStatus::complete, -1, 0.0);
}

}  // namespace

ReducedSolution separable_solve(const HFunction& H, double n, double r0, double R0,
                                double s0, double s1, double tol) {
  if (n == 1.0) throw std::invalid_argument("separable_solve: n = 1 is excluded");
  if (r0 <= 0.0) throw std::domain_error("separable_solve: r0 must be positive");

  const double c2 = 4.0 / (1.0 - n);
  const double omega0 = canonical_omega(n, r0, R0);
  if (omega0 == 0.0) {
    if (std::fabs(H(0.0)) > 0.0)
      throw SingularityError(
          "separable_solve: omega = 0 start with H(0) != 0 is singular");
    return {constant_curve(s0, s1, r0), 0.0, false};
  }

  const double sgn = omega0 > 0.0 ? 1.0 : -1.0;
  const double xi0 = std::log(r0);
  const double span = 4.0;
  // The flow has square-root contact at omega = 0; stop a hair early so the
  // step size never collapses against the singular point. Cubic H also allows
  // finite-xi blowup, so cap |omega| instead of integrating into the pole.
  const double omega_eps = 1e-7 * std::max(1.0, std::fabs(omega0));
  const double omega_cap = 1e6 * std::max(1.0, std::fabs(omega0));

  IntegratorOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;

  auto leg = [&](double xi_end) {
    Ivp ivp;
    ivp.rhs = [&H, n](double, const State& y, State& dydt) {
      dydt[0] = separable_rhs(H, n, y[0]);
    };
    ivp.y0 = {omega0};
    ivp.t0 = xi0;
    ivp.t1 = xi_end;
    ivp.events.push_back([sgn, omega_eps](double, const State& y) {
      return sgn * y[0] - omega_eps;
    });
    ivp.events.push_back([omega_cap](double, const State& y) {
      return omega_cap - std::fabs(y[0]);
    });
    return integrate_ivp(ivp, opt);
  };
  OmegaTable table{leg(xi0 + span), leg(xi0 - span), xi0};

  // The defect is read off the dense output between nodes, whose derivative
  // floor scales like h^3; keep h small enough that the floor sits below the
  // 10*tol contract.
  IntegratorOptions opt2 = opt;
  opt2.max_step = std::max(0.5 * std::cbrt(10.0 * tol),
                           std::fabs(s1 - s0) / 20000.0);

  const double margin = 1e-9;
  Ivp ivp;
  ivp.rhs = [&table, c2, n](double, const State& y, State& dydt) {
    dydt[0] = c2 * std::pow(y[0], (n + 1.0) / 2.0) * table.eval(std::log(y[0]));
  };
  ivp.y0 = {r0};
  ivp.t0 = s0;
  ivp.t1 = s1;
  ivp.events.push_back([&table, margin](double, const State& y) {
    if (y[0] <= 0.0) return -1.0;
    return table.hi() - std::log(y[0]) - margin;
  });
  ivp.events.push_back([&table, margin](double, const State& y) {
    if (y[0] <= 0.0) return -1.0;
    return std::log(y[0]) - table.lo() - margin;
  });
  SolutionCurve curve = integrate_ivp(ivp, opt2);

  bool turning = false;
  if (curve.status() == CurveStatus::stopped_at_event) {
    const SolutionCurve& edge = curve.event_index() == 0 ? table.fwd : table.bwd;
    turning = edge.status() == CurveStatus::stopped_at_event &&
              edge.event_index() == 0;
  }

  double defect = 0.0;
  const auto& ts = curve.times();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double sm = 0.5 * (ts[i] + ts[i + 1]);
    const double r = curve.eval(sm);
    if (r <= 0.0) continue;
    const double want = c2 * std::pow(r, (n + 1.0) / 2.0) * table.eval(std::log(r));
    defect = std::max(defect, std::fabs(curve.eval_deriv(sm) - want));
  }
  return {std::move(curve), defect, turning};
}

TimeFn quadrature_solve(const EquationSpec& spec, double t0, double x0, double v0,
                        double t1, double tol) {
  if (spec.family != "affine_H" && spec.family != "affine_H_n")
    throw std::invalid_argument("quadrature_solve: family '" + spec.family +
                                "' is not handled by the chart pipeline");
  if (x0 <= 0.0)
    throw std::domain_error("quadrature_solve: initial state must be positive");

  const auto chart = canonical_maps(spec.asol, spec.n, t0);
  const ChartJet ic = chart.transport(t0, x0, v0, rhs(spec, t0, x0, v0));
  const double s1 = chart.s_of(t1);
  ReducedSolution red = separable_solve(spec.H, spec.n, ic.r, ic.R, 0.0, s1, tol);

  const double s_lo = red.r.times().front();
  const double s_hi = red.r.times().back();
  const double ta = chart.t_of(s_lo);
  const double tb = chart.t_of(s_hi);
  const Interval dom{std::min(ta, tb), std::max(ta, tb)};

  // Shared state keeps the curve alive inside the jet closure.
  auto curve = std::make_shared<SolutionCurve>(std::move(red.r));
  const auto asol = spec.asol;
  const double mt = 2.0 / (spec.n - 1.0);
  const EquationSpec eq = spec;

  TimeFn result{
      "x_quadrature", dom, [curve, asol, mt, eq, chart](double t) {
        const double s = chart.s_of(t);
        const double r = curve->eval(s);
        const double R = curve->eval_deriv(s);
        const double a = asol.a.value(t);
        const double x = std::pow(a, -mt) * r;
        const double xdot = chart.velocity_from_R(t, x, R);
        const OdeJet j = rhs_jet(eq, t, x, xdot);
        return Jet3{x, xdot, j.F, j.Ft + j.Fx * xdot + j.Fdx * j.F};
      }};

  // Transport identity check: the canonical acceleration pulled back through
  // the chart must match the equation's own right-hand side.
  double worst = 0.0;
  for (double s : linspace(s_lo, s_hi, 15)) {
    const double r = curve->eval(s);
    const double R = curve->eval_deriv(s);
    const double t = chart.t_of(s);
    const double x = std::pow(asol.a.value(t), -mt) * r;
    const double xdot = chart.velocity_from_R(t, x, R);
    const double back =
        chart.acceleration_from_R2(t, x, xdot, canonical_rhs(eq.H, eq.n, r, R));
    worst = std::max(worst, std::fabs(back - rhs(eq, t, x, xdot)));
  }
  if (worst > 1e-6)
    throw NumericalError("quadrature_solve: chart transport defect " +
                         std::to_string(worst));
  return result;
}

}  // namespace ermakov
