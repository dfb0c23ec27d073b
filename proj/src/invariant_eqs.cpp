#include "ermakov/invariant_eqs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ermakov/errors.hpp"

namespace ermakov {

HFunction HFunction::polynomial(double h0, double h1, double h2, double h3) {
  HFunction h;
  h.poly_ = true;
  h.c_ = {h0, h1, h2, h3};
  return h;
}

HFunction HFunction::opaque(std::function<double(double)> value,
                            std::function<double(double)> deriv) {
  if (!value || !deriv)
    throw std::invalid_argument("HFunction::opaque: both channels required");
  HFunction h;
  h.poly_ = false;
  h.value_ = std::move(value);
  h.deriv_ = std::move(deriv);
  return h;
}

double HFunction::operator()(double I) const {
  if (poly_) return ((c_[0] * I + c_[1]) * I + c_[2]) * I + c_[3];
  return value_(I);
}

double HFunction::deriv(double I) const {
  if (poly_) return (3.0 * c_[0] * I + 2.0 * c_[1]) * I + c_[2];
  return deriv_(I);
}

const std::array<double, 4>& HFunction::coefficients() const {
  if (!poly_)
    throw std::logic_error("HFunction: opaque form has no coefficient vector");
  return c_;
}

namespace {

void require_n(double n) {
  if (n == 1.0) throw std::invalid_argument("exponent n = 1 is excluded");
}

ProjectiveSolution unit_solution(const HillBasis& basis) {
  return build_a(basis, {1.0, 0.0, 0.0});
}

// p - K/a^2 and its t-derivative at t; requires a > 0.
struct PTilde {
  double v, dv;
};
PTilde ptilde(const EquationSpec& spec, double t) {
  const Jet3 aj = spec.asol.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("rhs: a(t) <= 0 at t=" + std::to_string(t));
  const Jet3 pj = spec.pfun.jet(t);
  const double a2 = aj.f * aj.f;
  return {pj.f - spec.K / a2, pj.d1 + 2.0 * spec.K * aj.d1 / (a2 * aj.f)};
}

void require_x(double x) {
  if (x <= 0.0)
    throw SingularityError("rhs: state must stay positive (x=" + std::to_string(x) +
                           ")");
}

}  // namespace

EquationSpec make_ep(const HillBasis& basis, double k) {
  EquationSpec s;
  s.family = "ep";
  s.basis = basis;
  s.asol = unit_solution(basis);
  s.k = k;
  s.q = k;
  s.n = -3.0;
  s.pfun = basis.p;
  return s;
}

EquationSpec make_affine_H(const ProjectiveSolution& a, const HFunction& H) {
  EquationSpec s;
  s.family = "affine_H";
  s.basis = a.basis;
  s.asol = a;
  s.H = H;
  s.n = -3.0;
  s.pfun = a.basis.p;
  s.K = a.K;
  return s;
}

EquationSpec make_affine_H_n(const ProjectiveSolution& a, const HFunction& H,
                             double n) {
  require_n(n);
  EquationSpec s = make_affine_H(a, H);
  s.family = "affine_H_n";
  s.n = n;
  return s;
}

EquationSpec make_sl2_const(const ProjectiveSolution& a, double H0) {
  EquationSpec s;
  s.family = "sl2_const";
  s.basis = a.basis;
  s.asol = a;
  s.H0 = H0;
  s.H = HFunction::constant(H0);
  s.n = -3.0;
  s.pfun = a.basis.p;
  s.K = a.K;
  return s;
}

EquationSpec make_gen_ks(const ProjectiveSolution& a, double H0, double n) {
  require_n(n);
  EquationSpec s;
  s.family = "gen_ks";
  s.basis = a.basis;
  s.asol = a;
  s.H0 = H0;
  s.n = n;
  s.pfun = a.basis.p;
  s.K = a.K;
  return s;
}

EquationSpec make_ks2(const HillBasis& basis, double q, double n) {
  require_n(n);
  EquationSpec s;
  s.family = "ks2";
  s.basis = basis;
  s.asol = unit_solution(basis);
  s.q = q;
  s.n = n;
  s.pfun = basis.p;
  return s;
}

EquationSpec make_d2ks(const HillBasis& basis, const TimeFn& p, double q, double n,
                       const TimeFn& r, double t_ref) {
  require_n(n);
  // The basis must solve the companion equation u'' + [p - (r^2+2r')/4] u = 0.
  for (double t : {t_ref, t_ref + 0.37, t_ref + 0.91}) {
    const Jet3 rj = r.jet(t);
    const double expect = p.value(t) - 0.25 * (rj.f * rj.f + 2.0 * rj.d1);
    if (std::fabs(basis.p.value(t) - expect) > 1e-9)
      throw std::invalid_argument(
          "make_d2ks: basis does not solve the companion equation of (p, r)");
  }
  EquationSpec s;
  s.family = "d2ks";
  s.basis = basis;
  s.asol = unit_solution(basis);
  s.q = q;
  s.n = n;
  s.pfun = p;
  s.r = r;
  s.t_ref = t_ref;
  return s;
}

OdeJet rhs_jet(const EquationSpec& spec, double t, double x, double xdot) {
  require_x(x);
  OdeJet f;
  const double n = spec.n;

  if (spec.family == "ep") {
    const Jet3 pj = spec.pfun.jet(t);
    const double x3 = x * x * x;
    f.F = -pj.f * x + spec.k / x3;
    f.Ft = -pj.d1 * x;
    f.Fx = -pj.f - 3.0 * spec.k / (x3 * x);
    f.Fdx = 0.0;
    return f;
  }

  if (spec.family == "affine_H" || spec.family == "sl2_const") {
    const auto pt = ptilde(spec, t);
    const Jet3 aj = spec.asol.a.jet(t);
    const double nu = aj.d1 / aj.f;
    const double nudot = aj.d2 / aj.f - nu * nu;
    const double I = x * xdot - 0.5 * nu * x * x;
    const double x3 = x * x * x;
    const double H = spec.H(I), dH = spec.H.deriv(I);
    f.F = -pt.v * x + H / x3;
    f.Ft = -pt.dv * x + (dH / x3) * (-0.5 * nudot * x * x);
    f.Fx = -pt.v - 3.0 * H / (x3 * x) + (dH / x3) * (xdot - nu * x);
    f.Fdx = dH / (x * x);
    return f;
  }

  if (spec.family == "affine_H_n") {
    const Jet3 aj = spec.asol.a.jet(t);
    if (aj.f <= 0.0)
      throw std::domain_error("rhs: a(t) <= 0 at t=" + std::to_string(t));
    const double nu = aj.d1 / aj.f;
    const double nudot = aj.d2 / aj.f - nu * nu;
    const double nuddot = aj.d3 / aj.f - 3.0 * nu * nudot - nu * nu * nu;
    const double G = -(2.0 * nudot + nu * nu) / (n - 1.0);
    const double Gdot = -(2.0 * nuddot + 2.0 * nu * nudot) / (n - 1.0);
    const double sg = spec.sigma();

    const double zm = std::pow(x, -(n + 1.0) / 2.0);  // z^{-(n+1)/2}
    const double zn = std::pow(x, n);
    const double c1 = (1.0 - n) / 4.0;
    const double c2 = 2.0 / (1.0 - n);
    const double In = c1 * zm * (xdot - c2 * nu * x);
    const double H = spec.H(In), dH = spec.H.deriv(In);

    const double dIn_dt = -0.5 * nudot * zm * x;
    const double dIn_dz = (-(n + 1.0) / 2.0) * In / x - 0.5 * nu * zm;
    const double dIn_ddz = c1 * zm;

    f.F = G * x + sg * xdot * xdot / x + zn * H;
    f.Ft = Gdot * x + zn * dH * dIn_dt;
    f.Fx = G - sg * xdot * xdot / (x * x) + n * zn / x * H + zn * dH * dIn_dz;
    f.Fdx = 2.0 * sg * xdot / x + zn * dH * dIn_ddz;
    return f;
  }

  if (spec.family == "gen_ks") {
    const auto pt = ptilde(spec, t);
    const double c = 4.0 / (1.0 - n);
    const double sg = spec.sigma();
    const double zn = std::pow(x, n);
    f.F = -c * pt.v * x + sg * xdot * xdot / x + c * spec.H0 * zn;
    f.Ft = -c * pt.dv * x;
    f.Fx = -c * pt.v - sg * xdot * xdot / (x * x) + c * spec.H0 * n * zn / x;
    f.Fdx = 2.0 * sg * xdot / x;
    return f;
  }

  if (spec.family == "ks2") {
    const Jet3 pj = spec.pfun.jet(t);
    const double c = 4.0 / (1.0 - n);
    const double sg = spec.sigma();
    const double zn = std::pow(x, n);
    f.F = -c * pj.f * x + sg * xdot * xdot / x + c * spec.q * zn;
    f.Ft = -c * pj.d1 * x;
    f.Fx = -c * pj.f - sg * xdot * xdot / (x * x) + c * spec.q * n * zn / x;
    f.Fdx = 2.0 * sg * xdot / x;
    return f;
  }

  if (spec.family == "d2ks") {
    const Jet3 pj = spec.pfun.jet(t);
    const Jet3 rj = spec.r.jet(t);
    const double c = 4.0 / (1.0 - n);
    const double sg = spec.sigma();
    const double E = std::exp(-2.0 * integrate(spec.r, spec.t_ref, t));
    const double Edot = -2.0 * rj.f * E;
    const double wn = std::pow(x, n);
    f.F = -rj.f * xdot - c * pj.f * x + sg * xdot * xdot / x + c * spec.q * E * wn;
    f.Ft = -rj.d1 * xdot - c * pj.d1 * x + c * spec.q * Edot * wn;
    f.Fx = -c * pj.f - sg * xdot * xdot / (x * x) + c * spec.q * E * n * wn / x;
    f.Fdx = -rj.f + 2.0 * sg * xdot / x;
    return f;
  }

  throw std::invalid_argument("rhs: unknown family '" + spec.family + "'");
}

double rhs(const EquationSpec& spec, double t, double x, double xdot) {
  return rhs_jet(spec, t, x, xdot).F;
}

ODE2 as_ode(const EquationSpec& spec) {
  ODE2 ode;
  ode.label = spec.family;
  ode.F = [spec](double t, double x, double xdot) { return rhs_jet(spec, t, x, xdot); };
  ode.in_domain = [](double, double x) { return x > 0.0; };
  return ode;
}

double invariant_I(const ProjectiveSolution& sol, double t, double x, double xdot) {
  const Jet3 aj = sol.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("invariant_I: a(t) <= 0 at t=" + std::to_string(t));
  return x * xdot - 0.5 * (aj.d1 / aj.f) * x * x;
}

JInvariants invariants_J(const ProjectiveSolution& sol, double t, double x,
                         double xdot, double xddot) {
  const Jet3 aj = sol.a.jet(t);
  if (aj.f <= 0.0)
    throw std::domain_error("invariants_J: a(t) <= 0 at t=" + std::to_string(t));
  const double sq = std::sqrt(aj.f);
  JInvariants j;
  j.J1 = x / sq;
  j.J2 = sq * (xdot - 0.5 * (aj.d1 / aj.f) * x);
  j.J3 = aj.f * sq * (xddot + sol.basis.p.value(t) * x);
  return j;
}

namespace {

void require_constraint(double got, double want, const std::string& what) {
  if (std::fabs(got - want) > 1e-12)
    throw std::invalid_argument("closed_form_solution: constraint " + what +
                                " violated (got " + std::to_string(got) +
                                ", need " + std::to_string(want) + ")");
}

TimeFn basis_quadratic(const HillBasis& b, double A, double B, double C) {
  return A * (b.u1 * b.u1) + (2.0 * B) * (b.u1 * b.u2) + C * (b.u2 * b.u2);
}

TimeFn s_quadratic(const EquationSpec& spec, double A, double B, double C) {
  const TimeFn s = s_fn(spec.asol.a, spec.t_ref, spec.asol.a.domain());
  return spec.asol.a * (constant_fn(A) + (2.0 * B) * s + C * (s * s));
}

}  // namespace

TimeFn closed_form_solution(const EquationSpec& spec, double A, double B, double C) {
  const double disc = A * C - B * B;
  const double W2 = spec.basis.W * spec.basis.W;

  if (spec.family == "ep") {
    require_constraint(disc * W2, spec.k, "(AC-B^2) W^2 = k");
    return sqrt_fn(basis_quadratic(spec.basis, A, B, C)).renamed("x_closed");
  }
  if (spec.family == "sl2_const") {
    require_constraint(disc, spec.H0, "AC-B^2 = H0");
    return sqrt_fn(s_quadratic(spec, A, B, C)).renamed("x_closed");
  }
  if (spec.family == "gen_ks") {
    require_constraint(disc, spec.H0, "AC-B^2 = H0");
    return pow_fn(s_quadratic(spec, A, B, C), 2.0 / (1.0 - spec.n))
        .renamed("x_closed");
  }
  if (spec.family == "ks2") {
    require_constraint(disc * W2, spec.q, "(AC-B^2) W^2 = q");
    return pow_fn(basis_quadratic(spec.basis, A, B, C), 2.0 / (1.0 - spec.n))
        .renamed("x_closed");
  }
  if (spec.family == "d2ks") {
    require_constraint(disc * W2, spec.q, "(AC-B^2) W^2 = q");
    const TimeFn phi =
        exp_fn((2.0 / (spec.n - 1.0)) * antiderivative(spec.r, spec.t_ref));
    return (phi * pow_fn(basis_quadratic(spec.basis, A, B, C), 2.0 / (1.0 - spec.n)))
        .renamed("x_closed");
  }
  throw std::invalid_argument("closed_form_solution: family '" + spec.family +
                              "' has no superposition formula");
}

ProjectiveCoeffs coeffs_from_ic(const EquationSpec& spec, double t0, double x0,
                                double v0) {
  if (x0 <= 0.0)
    throw std::domain_error("coeffs_from_ic: initial state must be positive");
  const double n = spec.n;
  const double m = 2.0 / (1.0 - n);  // z = Q^m

  if (spec.family == "ep" || spec.family == "ks2" || spec.family == "d2ks") {
    double z0 = x0, dz0 = v0;
    if (spec.family == "d2ks") {
      const TimeFn phi =
          exp_fn((2.0 / (n - 1.0)) * antiderivative(spec.r, spec.t_ref));
      const Jet3 ph = phi.jet(t0);
      z0 = x0 / ph.f;
      dz0 = (v0 - ph.d1 * z0) / ph.f;
    }
    const double q = (spec.family == "ep") ? spec.k : spec.q;
    const double Q0 = std::pow(z0, 1.0 / m);
    const double dQ0 = (1.0 / m) * std::pow(z0, 1.0 / m - 1.0) * dz0;
    const double p0 = spec.basis.p.value(t0);
    // First integral of the quadratic: (2 Q Q'' - Q'^2)/4 + p Q^2 = q.
    const double ddQ0 = (4.0 * (q - p0 * Q0 * Q0) + dQ0 * dQ0) / (2.0 * Q0);
    return coeffs_from_values(spec.basis, t0, Q0, dQ0, ddQ0);
  }

  if (spec.family == "sl2_const" || spec.family == "gen_ks") {
    // Work over the derived basis u = sqrt(a), v = sqrt(a) s with W = 1 and
    // coefficient function p - K/a^2.
    const TimeFn a = spec.asol.a;
    const TimeFn s = s_fn(a, spec.t_ref, a.domain());
    const TimeFn pt{"ptilde", a.domain(), [spec](double t) {
                      const Jet3 aj = spec.asol.a.jet(t);
                      const Jet3 pj = spec.pfun.jet(t);
                      const double a2 = aj.f * aj.f;
                      const double v = pj.f - spec.K / a2;
                      const double dv = pj.d1 + 2.0 * spec.K * aj.d1 / (a2 * aj.f);
                      // Second/third channels are not needed downstream.
                      return Jet3{v, dv, 0.0, 0.0};
                    }};
    HillBasis derived{"derived", 0.0, pt, sqrt_fn(a), sqrt_fn(a) * s, 1.0};
    const double mm = (spec.family == "sl2_const") ? 0.5 : m;
    const double Q0 = std::pow(x0, 1.0 / mm);
    const double dQ0 = (1.0 / mm) * std::pow(x0, 1.0 / mm - 1.0) * v0;
    const double p0 = pt.value(t0);
    const double ddQ0 =
        (4.0 * (spec.H0 - p0 * Q0 * Q0) + dQ0 * dQ0) / (2.0 * Q0);
    return coeffs_from_values(derived, t0, Q0, dQ0, ddQ0);
  }

  throw std::invalid_argument("coeffs_from_ic: family '" + spec.family +
                              "' has no superposition formula");
}

TimeFn periodic_branch_s(double alpha) {
  if (!(std::fabs(alpha) < 1.0))
    throw std::invalid_argument("periodic_branch_s: need |alpha| < 1");
  const double root = std::sqrt(1.0 - alpha * alpha);
  const double beta = std::sqrt((1.0 - alpha) / (1.0 + alpha));
  return {"s_branch", Interval{}, [alpha, root, beta](double t) {
            const double tf = t - M_PI * std::round(t / M_PI);
            const double val = std::atan(beta * std::tan(tf)) / root;
            const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
            const double a = 1.0 + alpha * c2;
            const double da = -2.0 * alpha * s2;
            const double dda = -4.0 * alpha * c2;
            const double a2 = a * a;
            return Jet3{val, 1.0 / a, -da / a2,
                        (2.0 * da * da - a * dda) / (a2 * a)};
          }};
}

TimeFn periodic_branch_solution(double alpha, double A, double B, double C) {
  const TimeFn s = periodic_branch_s(alpha);
  const auto sol = build_a(catalog_basis("ince", alpha),
                           {1.0 + alpha, 0.0, 1.0 - alpha});
  return sqrt_fn(sol.a * (constant_fn(A) + (2.0 * B) * s + C * (s * s)))
      .renamed("x_periodic");
}

std::pair<EquationSpec, TimeFn> d2ks_to_standard(const EquationSpec& spec) {
  if (spec.family != "d2ks")
    throw std::invalid_argument("d2ks_to_standard: expects the damped family");
  const TimeFn phi =
      exp_fn((2.0 / (spec.n - 1.0)) * antiderivative(spec.r, spec.t_ref));
  EquationSpec std_spec = make_ks2(spec.basis, spec.q, spec.n);
  std_spec.t_ref = spec.t_ref;
  return {std_spec, phi.renamed("phi")};
}

std::vector<ParticularCandidate> particular_solutions(const EquationSpec& spec,
                                                      double C0,
                                                      const std::vector<double>& grid) {
  if (spec.family != "affine_H")
    throw std::invalid_argument("particular_solutions: affine_H only");
  if (C0 <= 0.0) throw std::invalid_argument("particular_solutions: need C0 > 0");

  // Candidates may be defined on only part of the grid (the quadrature curve
  // needs s a > 0); the residual is taken over the points where they exist.
  auto max_residual = [&spec, &grid](const TimeFn& x) {
    double worst = 0.0;
    int valid = 0;
    for (double t : grid) {
      try {
        const Jet3 j = x.jet(t);
        worst = std::max(worst, std::fabs(j.d2 - rhs(spec, t, j.f, j.d1)));
        ++valid;
      } catch (const std::domain_error&) {
      }
    }
    if (valid == 0) return std::numeric_limits<double>::infinity();
    return worst;
  };
  constexpr double tol = 1e-8;

  std::vector<ParticularCandidate> out;

  ParticularCandidate c1;
  c1.x = (C0 * sqrt_fn(spec.asol.a)).renamed("C0*sqrt(a)");
  c1.description = "C0 sqrt(a), any C0; needs H(0) = 0";
  c1.constraint_linear = spec.H(0.0);
  c1.constraint_quartic = spec.H(0.0);
  c1.max_residual = max_residual(c1.x);
  c1.admissible = c1.max_residual <= tol;
  out.push_back(std::move(c1));

  ParticularCandidate c2;
  const TimeFn s = s_fn(spec.asol.a, spec.t_ref, spec.asol.a.domain());
  c2.x = (C0 * sqrt_fn(s * spec.asol.a)).renamed("C0*sqrt(s*a)");
  const double HI = spec.H(0.5 * C0 * C0);
  c2.description = "C0 sqrt(s a); residual decides admissibility";
  c2.constraint_linear = C0 + 4.0 * HI;
  c2.constraint_quartic = C0 * C0 * C0 * C0 + 4.0 * HI;
  c2.max_residual = max_residual(c2.x);
  c2.admissible = c2.max_residual <= tol;
  out.push_back(std::move(c2));

  return out;
}

Lagrangian lagrangian_2ks(const EquationSpec& spec) {
  if (spec.family != "ks2" && spec.family != "ep")
    throw std::invalid_argument("lagrangian_2ks: needs the standard family");
  const double n = spec.n;
  const double cc = (1.0 - n) / 4.0;
  const double c = cc * cc;
  const double al = -(n + 3.0) / 2.0;
  const double be = (1.0 - n) / 2.0;
  const double ga = (n - 1.0) / 2.0;
  const double q = (spec.family == "ep") ? spec.k : spec.q;
  const TimeFn p = spec.pfun;

  return [c, al, be, ga, q, p](double t, double z, double dz) {
    if (z <= 0.0)
      throw SingularityError("lagrangian_2ks: z must stay positive");
    const double pv = p.value(t);
    const double za = std::pow(z, al);
    LagrangianJet L;
    L.L = c * za * dz * dz - pv * std::pow(z, be) - q * std::pow(z, ga);
    L.Lz = c * al * za / z * dz * dz - pv * be * std::pow(z, be - 1.0) -
           q * ga * std::pow(z, ga - 1.0);
    L.Ldz = 2.0 * c * za * dz;
    L.Lt_dz = 0.0;
    L.Lz_dz = 2.0 * c * al * za / z * dz;
    L.Ldz_dz = 2.0 * c * za;
    return L;
  };
}

Lagrangian lagrangian_emden_inverse() {
  return [](double, double z, double dz) {
    const double D = dz + z * z;
    if (std::fabs(D) < 1e-12)
      throw SingularityError("lagrangian_emden_inverse: z' + z^2 vanishes");
    const double D2 = D * D, D3 = D2 * D;
    LagrangianJet L;
    L.L = 1.0 / D;
    L.Lz = -2.0 * z / D2;
    L.Ldz = -1.0 / D2;
    L.Lt_dz = 0.0;
    L.Lz_dz = 4.0 * z / D3;
    L.Ldz_dz = 2.0 / D3;
    return L;
  };
}

double el_residual(const Lagrangian& L, const TimeFn& curve, double t) {
  const Jet3 c = curve.jet(t);
  const LagrangianJet j = L(t, c.f, c.d1);
  return j.Lt_dz + j.Lz_dz * c.d1 + j.Ldz_dz * c.d2 - j.Lz;
}

}  // namespace ermakov
