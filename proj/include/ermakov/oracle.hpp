#pragma once

#include <functional>
#include <vector>

#include "ermakov/timefn.hpp"

namespace ermakov {

using State = std::vector<double>;
/// Writes dy/dt into dydt (same size as y).
using RhsFn = std::function<void(double t, const State& y, State& dydt)>;
/// Stop condition: integration halts at the first root of g going <= 0.
using EventFn = std::function<double(double t, const State& y)>;

struct Ivp {
  RhsFn rhs;
  State y0;
  double t0 = 0.0;
  double t1 = 1.0;  // t1 < t0 integrates backward
  std::vector<EventFn> events;
  std::vector<double> tstops;  // times the stepper lands on exactly
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 = unlimited
};

enum class CurveStatus { complete, stopped_at_event };

/// Accepted integration nodes (t, y, y') with cubic Hermite dense output.
/// Nodes are stored with ascending t regardless of integration direction.
class SolutionCurve {
 public:
  SolutionCurve(std::vector<double> t, std::vector<State> y, std::vector<State> dy,
                CurveStatus status, int event_index, double event_time);

  double eval(double t, int component = 0) const;
  double eval_deriv(double t, int component = 0) const;
  State eval_state(double t) const;

  const std::vector<double>& times() const { return t_; }
  const std::vector<State>& states() const { return y_; }
  const std::vector<State>& derivs() const { return dy_; }
  std::size_t dim() const { return y_.empty() ? 0 : y_.front().size(); }

  CurveStatus status() const { return status_; }
  int event_index() const { return event_index_; }
  double event_time() const { return event_time_; }

 private:
  std::size_t locate(double t) const;
  std::vector<double> t_;
  std::vector<State> y_;
  std::vector<State> dy_;
  CurveStatus status_;
  int event_index_;
  double event_time_;
};

/// Embedded Dormand-Prince 5(4) with PI step-size control and FSAL.
/// Tableau: the classical DOPRI5 coefficients (Dormand & Prince 1980); the
/// regression test pins sqrt(1+t^2) on the canonical cubic-restoring-force
/// fixture so a tableau change cannot slip through unnoticed.
/// Step-size underflow or non-finite right-hand sides throw NumericalError
/// (the message carries the last valid state); events report through the
/// curve status, with the crossing located by bisection to 1e-12 in t.
SolutionCurve integrate_ivp(const Ivp& ivp, const IntegratorOptions& opt = {});

/// Classical fixed-step RK4, used as an independent cross-check.
SolutionCurve rk4_integrate(const Ivp& ivp, int nsteps);

/// Max |Q(t,y) - Q(t0,y0)| over the accepted nodes.
double monitor_invariant(const SolutionCurve& c,
                         const std::function<double(double, const State&)>& Q);

struct CurveDeviation {
  double max_abs = 0.0;
  double max_rel = 0.0;
  double at_t = 0.0;
};

/// Pointwise deviation between a numerical curve component and a TimeFn.
CurveDeviation compare_curves(const SolutionCurve& u, const TimeFn& v,
                              const std::vector<double>& grid, int component = 0);

}  // namespace ermakov
