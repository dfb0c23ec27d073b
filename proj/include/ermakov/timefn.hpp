#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ermakov/errors.hpp"
#include "ermakov/jet.hpp"

namespace ermakov {

struct Interval {
  double lo = -1e300;
  double hi = 1e300;

  bool contains(double t, double margin = 0.0) const {
    return t - margin >= lo && t + margin <= hi;
  }
  Interval intersect(const Interval& o) const {
    return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
};

/// Immutable scalar function of time carrying value and first three
/// derivatives. All coefficient functions in the library (p, a, s, r, u_i)
/// are TimeFn values; compositions keep derivatives exact via jet calculus.
class TimeFn {
 public:
  using JetFn = std::function<Jet3(double)>;

  TimeFn() : TimeFn("0", Interval{}, [](double) { return jet_const(0.0); }) {}
  TimeFn(std::string label, Interval domain, JetFn jet)
      : label_(std::move(label)), dom_(domain), jet_(std::move(jet)) {}

  /// Full jet at t. Throws std::domain_error outside the declared domain.
  Jet3 jet(double t) const {
    if (!dom_.contains(t))
      throw std::domain_error("TimeFn '" + label_ + "': t outside domain");
    return jet_(t);
  }
  double value(double t) const { return jet(t).f; }
  double operator()(double t) const { return value(t); }
  double deriv(double t, int order) const;

  const Interval& domain() const { return dom_; }
  const std::string& label() const { return label_; }
  TimeFn renamed(std::string label) const { return {std::move(label), dom_, jet_}; }

 private:
  std::string label_;
  Interval dom_;
  JetFn jet_;
};

TimeFn constant_fn(double c, std::string label = "");
TimeFn coordinate_fn(Interval dom = Interval{});
/// coeffs[k] multiplies t^k.
TimeFn polynomial_fn(std::vector<double> coeffs, Interval dom = Interval{});

TimeFn operator+(const TimeFn& a, const TimeFn& b);
TimeFn operator-(const TimeFn& a, const TimeFn& b);
TimeFn operator*(const TimeFn& a, const TimeFn& b);
TimeFn operator*(double c, const TimeFn& a);
TimeFn operator+(const TimeFn& a, double c);
/// Pointwise quotient; evaluation throws SingularityError where |b| < 1e-300.
TimeFn operator/(const TimeFn& a, const TimeFn& b);
TimeFn sqrt_fn(const TimeFn& a);
TimeFn pow_fn(const TimeFn& a, double alpha);
TimeFn exp_fn(const TimeFn& a);
/// Requires a > 0 on the evaluation points.
TimeFn log_fn(const TimeFn& a);
TimeFn sin_fn(const TimeFn& a);
TimeFn cos_fn(const TimeFn& a);
/// Evaluation throws SingularityError where cos(a) vanishes.
TimeFn tan_fn(const TimeFn& a);
TimeFn atan_fn(const TimeFn& a);

struct DerivativeCheck {
  double max_discrepancy = 0.0;  // max over grid and orders 1..3 of |analytic-FD|/(1+|analytic|)
  int worst_order = 0;
  double worst_t = 0.0;
};

/// Compares the jet's derivative channels against high-order central finite
/// differences of the value channel with one Richardson extrapolation level.
/// The supplied h is the order-1 step; orders 2 and 3 use internally scaled
/// steps (30h, 300h) so the difference quotients stay above the double
/// precision cancellation floor. Grid points need an interior margin of
/// 3*300*h relative to the domain, or std::domain_error is thrown.
DerivativeCheck check_derivatives(const TimeFn& f, const std::vector<double>& grid,
                                  double h = 1e-4);

/// Adaptive Simpson quadrature of the value channel with Richardson error
/// estimate per interval. tol is absolute; max bisection depth 60, exceeding
/// it throws ConvergenceError; non-finite integrand throws NumericalError.
double integrate(const TimeFn& f, double t0, double t1, double tol = 1e-10);

/// F(t) = int_{t0}^{t} f dt' as a TimeFn; the derivative channels are the
/// jet of f itself.
TimeFn antiderivative(const TimeFn& f, double t0, double tol = 1e-10);

/// Schwarzian derivative tau'''/tau' - 1.5 (tau''/tau')^2.
/// Throws SingularityError where |tau'| < 1e-12.
double schwarzian(const TimeFn& tau, double t);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace ermakov
