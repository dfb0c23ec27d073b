#include "ermakov/timefn.hpp"

#include <cmath>
#include <limits>

namespace ermakov {

double TimeFn::deriv(double t, int order) const {
  const Jet3 j = jet(t);
  switch (order) {
    case 0: return j.f;
    case 1: return j.d1;
    case 2: return j.d2;
    case 3: return j.d3;
    default: throw std::invalid_argument("TimeFn::deriv: order must be 0..3");
  }
}

TimeFn constant_fn(double c, std::string label) {
  if (label.empty()) label = "const(" + std::to_string(c) + ")";
  return {std::move(label), Interval{}, [c](double) { return jet_const(c); }};
}

TimeFn coordinate_fn(Interval dom) {
  return {"t", dom, [](double t) { return jet_var(t); }};
}

TimeFn polynomial_fn(std::vector<double> coeffs, Interval dom) {
  return {"poly", dom, [c = std::move(coeffs)](double t) {
            Jet3 acc = jet_const(0.0);
            const Jet3 x = jet_var(t);
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
            return acc;
          }};
}

TimeFn operator+(const TimeFn& a, const TimeFn& b) {
  return {"(" + a.label() + "+" + b.label() + ")", a.domain().intersect(b.domain()),
          [a, b](double t) { return a.jet(t) + b.jet(t); }};
}

TimeFn operator-(const TimeFn& a, const TimeFn& b) {
  return {"(" + a.label() + "-" + b.label() + ")", a.domain().intersect(b.domain()),
          [a, b](double t) { return a.jet(t) - b.jet(t); }};
}

TimeFn operator*(const TimeFn& a, const TimeFn& b) {
  return {"(" + a.label() + "*" + b.label() + ")", a.domain().intersect(b.domain()),
          [a, b](double t) { return a.jet(t) * b.jet(t); }};
}

TimeFn operator*(double c, const TimeFn& a) {
  return {a.label(), a.domain(), [c, a](double t) { return c * a.jet(t); }};
}

TimeFn operator+(const TimeFn& a, double c) {
  return {a.label(), a.domain(), [c, a](double t) { return a.jet(t) + c; }};
}

TimeFn operator/(const TimeFn& a, const TimeFn& b) {
  return {"(" + a.label() + "/" + b.label() + ")", a.domain().intersect(b.domain()),
          [a, b](double t) {
            const Jet3 den = b.jet(t);
            if (std::fabs(den.f) < 1e-300)
              throw SingularityError("quotient: denominator '" + b.label() +
                                     "' vanishes at t=" + std::to_string(t));
            return a.jet(t) / den;
          }};
}

TimeFn sqrt_fn(const TimeFn& a) {
  return {"sqrt(" + a.label() + ")", a.domain(), [a](double t) {
            const Jet3 g = a.jet(t);
            if (g.f <= 0.0)
              throw std::domain_error("sqrt_fn: argument '" + a.label() +
                                      "' not positive at t=" + std::to_string(t));
            return sqrt(g);
          }};
}

TimeFn pow_fn(const TimeFn& a, double alpha) {
  return {"pow(" + a.label() + ")", a.domain(), [a, alpha](double t) {
            const Jet3 g = a.jet(t);
            if (g.f <= 0.0)
              throw std::domain_error("pow_fn: argument '" + a.label() +
                                      "' not positive at t=" + std::to_string(t));
            return pow(g, alpha);
          }};
}

TimeFn antiderivative(const TimeFn& f, double t0, double tol) {
  return {"int(" + f.label() + ")", f.domain(), [f, t0, tol](double t) {
            const Jet3 j = f.jet(t);
            return Jet3{integrate(f, t0, t, tol), j.f, j.d1, j.d2};
          }};
}

TimeFn exp_fn(const TimeFn& a) {
  return {"exp(" + a.label() + ")", a.domain(),
          [a](double t) { return exp(a.jet(t)); }};
}

TimeFn log_fn(const TimeFn& a) {
  return {"log(" + a.label() + ")", a.domain(), [a](double t) {
            const Jet3 g = a.jet(t);
            if (g.f <= 0.0)
              throw std::domain_error("log_fn: argument '" + a.label() +
                                      "' not positive at t=" + std::to_string(t));
            return log(g);
          }};
}

TimeFn sin_fn(const TimeFn& a) {
  return {"sin(" + a.label() + ")", a.domain(),
          [a](double t) { return sin(a.jet(t)); }};
}

TimeFn cos_fn(const TimeFn& a) {
  return {"cos(" + a.label() + ")", a.domain(),
          [a](double t) { return cos(a.jet(t)); }};
}

TimeFn tan_fn(const TimeFn& a) {
  return {"tan(" + a.label() + ")", a.domain(), [a](double t) {
            const Jet3 g = a.jet(t);
            if (std::fabs(std::cos(g.f)) < 1e-300)
              throw SingularityError("tan_fn: pole of '" + a.label() +
                                     "' at t=" + std::to_string(t));
            return tan(g);
          }};
}

TimeFn atan_fn(const TimeFn& a) {
  return {"atan(" + a.label() + ")", a.domain(),
          [a](double t) { return atan(a.jet(t)); }};
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) return {lo};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

namespace {

double value_at(const TimeFn& f, double t) {
  const double v = f.value(t);
  if (!std::isfinite(v))
    throw NumericalError("check_derivatives: non-finite value of '" + f.label() +
                         "' at t=" + std::to_string(t));
  return v;
}

// 4th-order central difference quotients.
double fd_once(const TimeFn& f, double t, double h, int order) {
  switch (order) {
    case 1:
      return (value_at(f, t - 2 * h) - 8 * value_at(f, t - h) + 8 * value_at(f, t + h) -
              value_at(f, t + 2 * h)) /
             (12 * h);
    case 2:
      return (-value_at(f, t + 2 * h) + 16 * value_at(f, t + h) - 30 * value_at(f, t) +
              16 * value_at(f, t - h) - value_at(f, t - 2 * h)) /
             (12 * h * h);
    case 3:
      return (-value_at(f, t + 3 * h) + 8 * value_at(f, t + 2 * h) -
              13 * value_at(f, t + h) + 13 * value_at(f, t - h) -
              8 * value_at(f, t - 2 * h) + value_at(f, t - 3 * h)) /
             (8 * h * h * h);
    default: throw std::invalid_argument("fd_once: bad order");
  }
}

// One Richardson level on top of the O(h^4) scheme.
double fd_richardson(const TimeFn& f, double t, double h, int order) {
  const double coarse = fd_once(f, t, h, order);
  const double fine = fd_once(f, t, h / 2, order);
  return fine + (fine - coarse) / 15.0;
}

}  // namespace

DerivativeCheck check_derivatives(const TimeFn& f, const std::vector<double>& grid, double h) {
  if (h <= 0.0) throw std::invalid_argument("check_derivatives: h must be positive");
  DerivativeCheck rep;
  for (double t : grid) {
    const double scale = std::max(1.0, std::fabs(t));
    const double steps[3] = {h * scale, 30 * h * scale, 300 * h * scale};
    // widest stencil reach: order 3 at full step
    if (!f.domain().contains(t, 3 * steps[2]))
      throw std::domain_error("check_derivatives: grid point too close to domain boundary");
    const Jet3 j = f.jet(t);
    const double analytic[3] = {j.d1, j.d2, j.d3};
    for (int k = 1; k <= 3; ++k) {
      const double fd = fd_richardson(f, t, steps[k - 1], k);
      const double disc = std::fabs(analytic[k - 1] - fd) / (1.0 + std::fabs(analytic[k - 1]));
      if (disc > rep.max_discrepancy) {
        rep.max_discrepancy = disc;
        rep.worst_order = k;
        rep.worst_t = t;
      }
    }
  }
  return rep;
}

namespace {

constexpr int kSimpsonMaxDepth = 60;

double fvalue(const TimeFn& f, double t) {
  const double v = f.value(t);
  if (!std::isfinite(v))
    throw NumericalError("integrate: non-finite integrand '" + f.label() +
                         "' at t=" + std::to_string(t));
  return v;
}

double simpson(double fa, double fm, double fb, double w) {
  return w / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const TimeFn& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  if (!(a < m && m < b))
    throw ConvergenceError("integrate: refinement below machine resolution on '" +
                           f.label() + "'");
  const double fl = fvalue(f, 0.5 * (a + m));
  const double fr = fvalue(f, 0.5 * (m + b));
  const double left = simpson(fa, fl, fm, m - a);
  const double right = simpson(fm, fr, fb, b - m);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth >= kSimpsonMaxDepth)
    throw ConvergenceError("integrate: adaptive Simpson depth exhausted on '" + f.label() +
                           "'");
  return adapt(f, a, m, fa, fl, fm, left, tol / 2, depth + 1) +
         adapt(f, m, b, fm, fr, fb, right, tol / 2, depth + 1);
}

}  // namespace

double integrate(const TimeFn& f, double t0, double t1, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("integrate: tol must be positive");
  if (t0 == t1) return 0.0;
  if (t1 < t0) return -integrate(f, t1, t0, tol);
  if (!f.domain().contains(t0) || !f.domain().contains(t1))
    throw std::domain_error("integrate: range outside domain of '" + f.label() + "'");
  const double fa = fvalue(f, t0);
  const double fm = fvalue(f, 0.5 * (t0 + t1));
  const double fb = fvalue(f, t1);
  return adapt(f, t0, t1, fa, fm, fb, simpson(fa, fm, fb, t1 - t0), tol, 0);
}

double schwarzian(const TimeFn& tau, double t) {
  const Jet3 j = tau.jet(t);
  if (std::fabs(j.d1) < 1e-12)
    throw SingularityError("schwarzian: tau' vanishes at t=" + std::to_string(t));
  const double q = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * q * q;
}

}  // namespace ermakov
