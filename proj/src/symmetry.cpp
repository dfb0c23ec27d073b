#include "ermakov/symmetry.hpp"

#include <cmath>
#include <stdexcept>

namespace ermakov {

std::pair<double, double> prolong2(const PointVectorField& X, double t, double x,
                                   double xdot, double xddot) {
  const FieldJet xi = X.xi(t, x);
  const FieldJet eta = X.eta(t, x);
  const double eta1 = eta.t + (eta.x - xi.t) * xdot - xi.x * xdot * xdot;
  const double eta2 = eta.tt + (2.0 * eta.tx - xi.tt) * xdot +
                      (eta.xx - 2.0 * xi.tx) * xdot * xdot -
                      xi.xx * xdot * xdot * xdot + (eta.x - 2.0 * xi.t) * xddot -
                      3.0 * xi.x * xdot * xddot;
  return {eta1, eta2};
}

double symmetry_residual(const PointVectorField& X, const ODE2& ode, double t,
                         double x, double xdot) {
  if (!ode.in_domain(t, x))
    throw std::domain_error("symmetry_residual: (t,x) outside domain of '" +
                            ode.label + "'");
  const OdeJet f = ode.F(t, x, xdot);
  const auto [eta1, eta2] = prolong2(X, t, x, xdot, f.F);
  const FieldJet xi = X.xi(t, x);
  const FieldJet eta = X.eta(t, x);
  return eta2 - xi.v * f.Ft - eta.v * f.Fx - eta1 * f.Fdx;
}

std::pair<double, double> lie_bracket(const PointVectorField& X,
                                      const PointVectorField& Y, double t, double x) {
  const FieldJet xx = X.xi(t, x), xe = X.eta(t, x);
  const FieldJet yx = Y.xi(t, x), ye = Y.eta(t, x);
  const double bxi = xx.v * yx.t + xe.v * yx.x - yx.v * xx.t - ye.v * xx.x;
  const double beta = xx.v * ye.t + xe.v * ye.x - yx.v * xe.t - ye.v * xe.x;
  return {bxi, beta};
}

PointVectorField scaled_field(const TimeFn& f, const TimeFn& g, std::string label) {
  return {std::move(label),
          [f](double t, double) {
            const Jet3 j = f.jet(t);
            return FieldJet{j.f, j.d1, 0.0, j.d2, 0.0, 0.0};
          },
          [g](double t, double x) {
            const Jet3 j = g.jet(t);
            return FieldJet{j.f * x, j.d1 * x, j.f, j.d2 * x, j.d1, 0.0};
          }};
}

PointVectorField dilation_field() {
  return {"x d/dx",
          [](double, double) { return FieldJet{}; },
          [](double, double x) {
            FieldJet e;
            e.v = x;
            e.x = 1.0;
            return e;
          }};
}

std::vector<PointVectorField> make_generators(const std::string& kind,
                                              const ProjectiveSolution& sol,
                                              const GeneratorParams& params) {
  const TimeFn a = sol.a;
  const TimeFn adot = projective_derivative(sol);
  const PointVectorField X1 = scaled_field(a, 0.5 * adot, "X1");

  if (kind == "ep_field") return {X1};

  if (kind == "affine_pair" || kind == "sl2_triple") {
    const double beta = (kind == "sl2_triple") ? 0.5 : params.beta;
    const TimeFn s = s_fn(a, params.s_anchor, a.domain());
    const TimeFn xi2 = s * a;
    const TimeFn g2 = (0.5 * (s * adot)) + beta;
    const PointVectorField X2 = scaled_field(xi2, g2, "X2");
    if (kind == "affine_pair") return {X1, X2};

    const TimeFn xi3 = (s * s) * a;
    const TimeFn g3 = 0.5 * ((s * s) * adot) + s;
    const PointVectorField X3 = scaled_field(xi3, g3, "X3");
    return {X1, X2, X3};
  }

  if (kind == "d2ks_field") {
    if (params.n == 1.0)
      throw std::invalid_argument("make_generators: exponent n = 1 is excluded");
    const double c = 2.0 / (1.0 - params.n);
    const TimeFn g = c * (adot - a * params.r);
    return {scaled_field(a, g, "X_d2ks")};
  }

  throw std::invalid_argument("make_generators: unknown kind '" + kind + "'");
}

double check_partials(const PointVectorField& X, const std::vector<double>& ts,
                      const std::vector<double>& xs, double h) {
  double worst = 0.0;
  auto probe = [&](const FieldFn& comp) {
    for (double t : ts) {
      for (double x : xs) {
        const FieldJet j = comp(t, x);
        const double ht = h * std::max(1.0, std::fabs(t));
        const double hx = h * std::max(1.0, std::fabs(x));
        // First partials from the value channel, second partials from the
        // first-partial channels; that validates every stored entry.
        const double fd_t = (comp(t + ht, x).v - comp(t - ht, x).v) / (2.0 * ht);
        const double fd_x = (comp(t, x + hx).v - comp(t, x - hx).v) / (2.0 * hx);
        const double fd_tt = (comp(t + ht, x).t - comp(t - ht, x).t) / (2.0 * ht);
        const double fd_tx = (comp(t, x + hx).t - comp(t, x - hx).t) / (2.0 * hx);
        const double fd_xx = (comp(t, x + hx).x - comp(t, x - hx).x) / (2.0 * hx);
        const double pairs[5][2] = {{j.t, fd_t},
                                    {j.x, fd_x},
                                    {j.tt, fd_tt},
                                    {j.tx, fd_tx},
                                    {j.xx, fd_xx}};
        for (const auto& pr : pairs)
          worst = std::max(worst,
                           std::fabs(pr[0] - pr[1]) / (1.0 + std::fabs(pr[0])));
      }
    }
  };
  probe(X.xi);
  probe(X.eta);
  return worst;
}

}  // namespace ermakov
