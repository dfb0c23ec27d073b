#include "ermakov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "ermakov/errors.hpp"

namespace ermakov {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

std::string describe_state(double t, const State& y) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t << ", y=[";
  for (std::size_t i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
  os << "]";
  return os.str();
}

void eval_rhs(const RhsFn& f, double t, const State& y, State& out) {
  f(t, y, out);
  for (double v : out) {
    if (!std::isfinite(v))
      throw NumericalError("integrate_ivp: right-hand side non-finite at " +
                           describe_state(t, y));
  }
}

// Cubic Hermite on [ta, tb] given endpoint values and slopes.
double hermite(double ta, double tb, double ya, double yb, double fa, double fb,
               double t) {
  const double h = tb - ta;
  const double th = (t - ta) / h;
  const double th2 = th * th, th3 = th2 * th;
  return (1.0 - 3.0 * th2 + 2.0 * th3) * ya + (3.0 * th2 - 2.0 * th3) * yb +
         h * ((th - 2.0 * th2 + th3) * fa + (th3 - th2) * fb);
}

double hermite_deriv(double ta, double tb, double ya, double yb, double fa, double fb,
                     double t) {
  const double h = tb - ta;
  const double th = (t - ta) / h;
  const double th2 = th * th;
  return ((6.0 * th2 - 6.0 * th) * ya + (6.0 * th - 6.0 * th2) * yb) / h +
         (1.0 - 4.0 * th + 3.0 * th2) * fa + (3.0 * th2 - 2.0 * th) * fb;
}

struct EventHit {
  int index = -1;
  double t = 0.0;
};

}  // namespace

SolutionCurve::SolutionCurve(std::vector<double> t, std::vector<State> y,
                             std::vector<State> dy, CurveStatus status,
                             int event_index, double event_time)
    : t_(std::move(t)),
      y_(std::move(y)),
      dy_(std::move(dy)),
      status_(status),
      event_index_(event_index),
      event_time_(event_time) {
  if (t_.size() < 1 || t_.size() != y_.size() || t_.size() != dy_.size())
    throw NumericalError("SolutionCurve: inconsistent node arrays");
  if (t_.size() >= 2 && t_.front() > t_.back()) {
    std::reverse(t_.begin(), t_.end());
    std::reverse(y_.begin(), y_.end());
    std::reverse(dy_.begin(), dy_.end());
  }
}

std::size_t SolutionCurve::locate(double t) const {
  const double lo = t_.front(), hi = t_.back();
  const double slack = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  if (t < lo - slack || t > hi + slack)
    throw std::domain_error("SolutionCurve: evaluation outside integrated range");
  if (t_.size() == 1) return 0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  if (i == 0) return 0;
  if (i >= t_.size()) return t_.size() - 2;
  return i - 1;
}

double SolutionCurve::eval(double t, int component) const {
  const std::size_t i = locate(t);
  if (t_.size() == 1) return y_[0][static_cast<std::size_t>(component)];
  const auto k = static_cast<std::size_t>(component);
  return hermite(t_[i], t_[i + 1], y_[i][k], y_[i + 1][k], dy_[i][k], dy_[i + 1][k], t);
}

double SolutionCurve::eval_deriv(double t, int component) const {
  const std::size_t i = locate(t);
  if (t_.size() == 1) return dy_[0][static_cast<std::size_t>(component)];
  const auto k = static_cast<std::size_t>(component);
  return hermite_deriv(t_[i], t_[i + 1], y_[i][k], y_[i + 1][k], dy_[i][k],
                       dy_[i + 1][k], t);
}

State SolutionCurve::eval_state(double t) const {
  State out(dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval(t, static_cast<int>(k));
  return out;
}

SolutionCurve integrate_ivp(const Ivp& ivp, const IntegratorOptions& opt) {
  const std::size_t n = ivp.y0.size();
  if (n == 0) throw NumericalError("integrate_ivp: empty state");
  if (!ivp.rhs) throw NumericalError("integrate_ivp: missing right-hand side");

  const double dir = (ivp.t1 >= ivp.t0) ? 1.0 : -1.0;
  const double span = std::fabs(ivp.t1 - ivp.t0);

  double t = ivp.t0;
  State y = ivp.y0;
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
  eval_rhs(ivp.rhs, t, y, k1);

  std::vector<double> ts{t};
  std::vector<State> ys{y};
  std::vector<State> fs{k1};

  // Event sign bookkeeping: an event fires on the first transition to g <= 0.
  std::vector<double> gprev(ivp.events.size());
  for (std::size_t i = 0; i < ivp.events.size(); ++i) {
    gprev[i] = ivp.events[i](t, y);
    if (gprev[i] <= 0.0)
      return SolutionCurve(std::move(ts), std::move(ys), std::move(fs),
                           CurveStatus::stopped_at_event, static_cast<int>(i), t);
  }

  if (span == 0.0)
    return SolutionCurve(std::move(ts), std::move(ys), std::move(fs),
                         CurveStatus::complete, -1, ivp.t0);

  // Mandatory output points, sorted along the direction of integration.
  std::vector<double> stops = ivp.tstops;
  stops.push_back(ivp.t1);
  std::sort(stops.begin(), stops.end(),
            [dir](double a, double b) { return dir * a < dir * b; });
  std::size_t next_stop = 0;
  while (next_stop < stops.size() && dir * (stops[next_stop] - t) <= 0.0) ++next_stop;

  double h = dir * span * 1e-3;
  if (opt.max_step > 0.0) h = dir * std::min(std::fabs(h), opt.max_step);
  double errprev = 1.0;
  long steps = 0;

  while (dir * (ivp.t1 - t) > 0.0) {
    if (++steps > 20000000)
      throw NumericalError("integrate_ivp: step budget exhausted at " +
                           describe_state(t, y));
    if (opt.max_step > 0.0 && std::fabs(h) > opt.max_step) h = dir * opt.max_step;
    const double hmin = 4.0 * std::numeric_limits<double>::epsilon() *
                        std::max(1.0, std::fabs(t));
    if (std::fabs(h) < hmin)
      throw NumericalError("integrate_ivp: step size underflow at " +
                           describe_state(t, y));

    bool hit_stop = false;
    if (next_stop < stops.size() && dir * (t + h - stops[next_stop]) >= 0.0) {
      h = stops[next_stop] - t;
      hit_stop = true;
      if (std::fabs(h) == 0.0) {  // already standing on the stop
        ++next_stop;
        continue;
      }
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    eval_rhs(ivp.rhs, t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval_rhs(ivp.rhs, t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval_rhs(ivp.rhs, t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval_rhs(ivp.rhs, t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    eval_rhs(ivp.rhs, t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    const double tnew = hit_stop ? stops[next_stop] : t + h;
    eval_rhs(ivp.rhs, tnew, ynew, k7);  // FSAL stage

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                     e7 * k7[i]);
      const double sc =
          opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double r = yerr[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      EventHit hit;
      for (std::size_t i = 0; i < ivp.events.size(); ++i) {
        const double g = ivp.events[i](tnew, ynew);
        if (gprev[i] > 0.0 && g <= 0.0) {
          // Bisect the Hermite interpolant of this step down to 1e-12 in t.
          double ta = t, tb = tnew;
          State ymid(n);
          while (std::fabs(tb - ta) > 1e-12) {
            const double tm = 0.5 * (ta + tb);
            if (tm == ta || tm == tb) break;
            for (std::size_t j = 0; j < n; ++j)
              ymid[j] = hermite(t, tnew, y[j], ynew[j], k1[j], k7[j], tm);
            if (ivp.events[i](tm, ymid) <= 0.0)
              tb = tm;
            else
              ta = tm;
          }
          if (hit.index < 0 || dir * (tb - hit.t) < 0.0) {
            hit.index = static_cast<int>(i);
            hit.t = tb;
          }
        }
        gprev[i] = g;
      }
      if (hit.index >= 0) {
        State ye(n), fe(n);
        for (std::size_t j = 0; j < n; ++j)
          ye[j] = hermite(t, tnew, y[j], ynew[j], k1[j], k7[j], hit.t);
        eval_rhs(ivp.rhs, hit.t, ye, fe);
        ts.push_back(hit.t);
        ys.push_back(ye);
        fs.push_back(fe);
        return SolutionCurve(std::move(ts), std::move(ys), std::move(fs),
                             CurveStatus::stopped_at_event, hit.index, hit.t);
      }

      t = tnew;
      y = ynew;
      k1 = k7;
      ts.push_back(t);
      ys.push_back(y);
      fs.push_back(k1);
      if (hit_stop) ++next_stop;

      // PI controller (Gustafsson): exponents 0.7/5 and 0.4/5, safety 0.9.
      double factor;
      if (err == 0.0) {
        factor = 5.0;
      } else {
        factor = 0.9 * std::pow(err, -0.14) * std::pow(errprev, 0.08);
        factor = std::min(5.0, std::max(0.2, factor));
      }
      errprev = std::max(err, 1e-4);
      h = h * factor;
    } else {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
  }

  return SolutionCurve(std::move(ts), std::move(ys), std::move(fs),
                       CurveStatus::complete, -1, ivp.t1);
}

SolutionCurve rk4_integrate(const Ivp& ivp, int nsteps) {
  if (nsteps < 1) throw NumericalError("rk4_integrate: need at least one step");
  const std::size_t n = ivp.y0.size();
  const double h = (ivp.t1 - ivp.t0) / nsteps;

  double t = ivp.t0;
  State y = ivp.y0;
  State k1(n), k2(n), k3(n), k4(n), ytmp(n);
  eval_rhs(ivp.rhs, t, y, k1);

  std::vector<double> ts{t};
  std::vector<State> ys{y};
  std::vector<State> fs{k1};

  for (int s = 0; s < nsteps; ++s) {
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    eval_rhs(ivp.rhs, t + 0.5 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    eval_rhs(ivp.rhs, t + 0.5 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
    eval_rhs(ivp.rhs, t + h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = ivp.t0 + (s + 1) * h;
    eval_rhs(ivp.rhs, t, y, k1);
    ts.push_back(t);
    ys.push_back(y);
    fs.push_back(k1);
  }
  return SolutionCurve(std::move(ts), std::move(ys), std::move(fs),
                       CurveStatus::complete, -1, ivp.t1);
}

double monitor_invariant(const SolutionCurve& c,
                         const std::function<double(double, const State&)>& Q) {
  const auto& ts = c.times();
  const auto& ys = c.states();
  const double q0 = Q(ts.front(), ys.front());
  double drift = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    drift = std::max(drift, std::fabs(Q(ts[i], ys[i]) - q0));
  return drift;
}

CurveDeviation compare_curves(const SolutionCurve& u, const TimeFn& v,
                              const std::vector<double>& grid, int component) {
  CurveDeviation dev;
  dev.at_t = grid.empty() ? 0.0 : grid.front();
  for (double t : grid) {
    const double a = u.eval(t, component);
    const double b = v.value(t);
    const double abs = std::fabs(a - b);
    if (abs > dev.max_abs) {
      dev.max_abs = abs;
      dev.at_t = t;
    }
    dev.max_rel = std::max(dev.max_rel, abs / std::max(1e-300, std::fabs(b)));
  }
  return dev;
}

}  // namespace ermakov
