#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ermakov/symmetry.hpp"
#include "support.hpp"

using namespace ermakov;

namespace {

// The Ermakov-Pinney equation xddot = -p x + k x^-3 with constant p.
ODE2 ep_ode(double p, double k) {
  ODE2 ode;
  ode.label = "ep";
  ode.F = [p, k](double, double x, double) {
    OdeJet f;
    const double x4 = x * x * x * x;
    f.F = -p * x + k / (x * x * x);
    f.Ft = 0.0;
    f.Fx = -p - 3.0 * k / x4;
    f.Fdx = 0.0;
    return f;
  };
  ode.in_domain = [](double, double x) { return x > 0.0; };
  return ode;
}

const std::vector<std::pair<std::string, double>> kCatalog = {
    {"free", 0.0}, {"const_neg", 0.7}, {"const_pos", 1.3}, {"ince", 0.5}};

// A strictly positive superposition for each catalog basis.
ProjectiveSolution positive_solution(const std::string& family, double param) {
  const HillBasis b = catalog_basis(family, param);
  if (family == "ince") return build_a(b, {1.0 + param, 0.0, 1.0 - param});
  if (family == "const_pos") return build_a(b, {2.0, 0.0, 1.0});
  return build_a(b, {1.0, 0.0, 1.0});
}

}  // namespace

TEST_CASE("prolongation coefficients at fixed jets") {
  const PointVectorField ddt = scaled_field(constant_fn(1.0), constant_fn(0.0), "d/dt");
  const PointVectorField xdx = dilation_field();
  const PointVectorField dil =
      scaled_field(coordinate_fn(), constant_fn(0.5), "t d/dt + x/2 d/dx");

  for (double xdot : {-1.0, 0.0, 2.0}) {
    for (double xddot : {-0.5, 0.0, 1.5}) {
      const auto [e1a, e2a] = prolong2(ddt, 0.7, 1.3, xdot, xddot);
      CHECK(e1a == 0.0);
      CHECK(e2a == 0.0);

      const auto [e1b, e2b] = prolong2(xdx, 0.7, 1.3, xdot, xddot);
      CHECK(e1b == doctest::Approx(xdot));
      CHECK(e2b == doctest::Approx(xddot));

      const auto [e1c, e2c] = prolong2(dil, 0.7, 1.3, xdot, xddot);
      CHECK(e1c == doctest::Approx(-0.5 * xdot));
      CHECK(e2c == doctest::Approx(-1.5 * xddot));
    }
  }
}

TEST_CASE("prolongation matches the total-derivative recursion along curves") {
  // eta^(j) = D eta^(j-1) - u^(j) D xi, with D realized by finite differences
  // along the curve x(t) = 2 + sin t.
  const auto sol = positive_solution("ince", 0.5);
  const auto fields = make_generators("sl2_triple", sol);

  auto xc = [](double t) { return 2.0 + std::sin(t); };
  auto dxc = [](double t) { return std::cos(t); };
  auto ddxc = [](double t) { return -std::sin(t); };
  auto dddxc = [](double t) { return -std::cos(t); };
  const double h = 1e-4;

  for (const auto& X : fields) {
    for (double t : linspace(-0.9, 0.9, 7)) {
      auto eta_on = [&](double u) { return X.eta(u, xc(u)).v; };
      auto xi_on = [&](double u) { return X.xi(u, xc(u)).v; };
      auto eta1_on = [&](double u) {
        return prolong2(X, u, xc(u), dxc(u), ddxc(u)).first;
      };
      const double Dxi = (xi_on(t + h) - xi_on(t - h)) / (2.0 * h);
      const double Deta = (eta_on(t + h) - eta_on(t - h)) / (2.0 * h);
      const double brute1 = Deta - dxc(t) * Dxi;
      const double Deta1 = (eta1_on(t + h) - eta1_on(t - h)) / (2.0 * h);
      const double brute2 = Deta1 - ddxc(t) * Dxi;

      const auto [eta1, eta2] = prolong2(X, t, xc(t), dxc(t), ddxc(t));
      CHECK(std::fabs(eta1 - brute1) <= 1e-5);
      CHECK(std::fabs(eta2 - brute2) <= 1e-5);
      (void)dddxc;
    }
  }
}

TEST_CASE("symmetry residual vanishes for the oscillator-born field") {
  // a = cos t solves the projective equation for p = 1/4; its field is a
  // symmetry of xddot = -x/4 + x^-3.
  const auto sol = build_a(catalog_basis("const_pos", 1.0), {1.0, 0.0, -1.0});
  const auto X = make_generators("ep_field", sol).front();
  const ODE2 ode = ep_ode(0.25, 1.0);
  for (double t : {0.0, 0.5, 1.0})
    for (double x : {0.5, 1.0, 2.0})
      for (double xdot : {-1.0, 0.0, 1.0})
        CHECK(std::fabs(symmetry_residual(X, ode, t, x, xdot)) <= 1e-9);
}

TEST_CASE("time translation fails on a driven equation") {
  ODE2 ode;
  ode.label = "driven";
  ode.F = [](double t, double x, double) {
    OdeJet f;
    f.F = -t * x;
    f.Ft = -x;
    f.Fx = -t;
    return f;
  };
  const PointVectorField ddt = scaled_field(constant_fn(1.0), constant_fn(0.0), "d/dt");
  CHECK(std::fabs(symmetry_residual(ddt, ode, 0.3, 2.0, 0.0)) ==
        doctest::Approx(2.0));  // |p'(t) x| with p = t

  // Free particle keeps its dilation symmetry.
  ODE2 free_ode;
  free_ode.label = "free";
  free_ode.F = [](double, double, double) { return OdeJet{}; };
  const PointVectorField dil =
      scaled_field(coordinate_fn(), constant_fn(0.5), "dil");
  CHECK(symmetry_residual(dil, free_ode, 0.3, 2.0, 1.7) == 0.0);
}

TEST_CASE("domain predicate is enforced") {
  const ODE2 ode = ep_ode(0.25, 1.0);
  const PointVectorField ddt = scaled_field(constant_fn(1.0), constant_fn(0.0), "d/dt");
  CHECK_THROWS_AS(symmetry_residual(ddt, ode, 0.0, -1.0, 0.0), std::domain_error);
}

TEST_CASE("bracket of projective fields is the field of the pair Wronskian") {
  const HillBasis free_b = catalog_basis("free");
  const auto s1 = build_a(free_b, {1.0, 0.0, 0.0});   // a = t^2
  const auto s2 = build_a(free_b, {0.0, 0.5, 0.0});   // a = t
  const auto X = make_generators("ep_field", s1).front();
  const auto Y = make_generators("ep_field", s2).front();
  const auto w = wronskian_pair(s1, s2);  // a = -t^2
  const auto Z = make_generators("ep_field", w).front();

  for (double t : {-1.5, 0.4, 2.0}) {
    for (double x : {0.5, 1.0, 2.0}) {
      const auto [bxi, beta] = lie_bracket(X, Y, t, x);
      CHECK(bxi == doctest::Approx(Z.xi(t, x).v).epsilon(1e-9));
      CHECK(beta == doctest::Approx(Z.eta(t, x).v).epsilon(1e-9));
    }
  }

  // [d/dt, t d/dt] = d/dt.
  const PointVectorField A = scaled_field(constant_fn(1.0), constant_fn(0.0), "d/dt");
  const PointVectorField B = scaled_field(coordinate_fn(), constant_fn(0.0), "t d/dt");
  const auto [bxi, beta] = lie_bracket(A, B, 0.8, 1.1);
  CHECK(bxi == doctest::Approx(1.0));
  CHECK(beta == doctest::Approx(0.0));
}

TEST_CASE("squared-basis fields satisfy the canonical commutation table") {
  // Y1 = X_{u1^2}, Y2 = X_{u1 u2}, Y3 = X_{u2^2} over a W = 1 basis:
  // [Y1,Y2] = Y1, [Y1,Y3] = 2 Y2, [Y2,Y3] = Y3.
  const HillBasis b = catalog_basis("ince", 0.0);
  const auto Y1 = make_generators("ep_field", build_a(b, {1, 0, 0})).front();
  const auto Y2 = make_generators("ep_field", build_a(b, {0, 0.5, 0})).front();
  const auto Y3 = make_generators("ep_field", build_a(b, {0, 0, 1})).front();

  auto check_eq = [](const PointVectorField& L, const PointVectorField& R1,
                     const PointVectorField& R2, double c1, double c2) {
    for (double t : linspace(-1.0, 1.0, 5)) {
      for (double x : linspace(0.5, 2.0, 5)) {
        const auto [bxi, beta] = lie_bracket(R1, R2, t, x);
        CHECK(std::fabs(bxi - c1 * L.xi(t, x).v) <= 1e-9);
        CHECK(std::fabs(beta - c2 * L.eta(t, x).v) <= 1e-9);
      }
    }
  };
  check_eq(Y1, Y1, Y2, 1.0, 1.0);
  check_eq(Y2, Y1, Y3, 2.0, 2.0);
  check_eq(Y3, Y2, Y3, 1.0, 1.0);
}

TEST_CASE("generator construction worked examples") {
  // a = 1 over the free basis gives d/dt and t d/dt + x/2 d/dx.
  const auto one = build_a(catalog_basis("free"), {0.0, 0.0, 1.0});
  const auto pair = make_generators("affine_pair", one);
  CHECK(pair[0].xi(1.7, 2.0).v == doctest::Approx(1.0));
  CHECK(pair[0].eta(1.7, 2.0).v == doctest::Approx(0.0));
  CHECK(pair[1].xi(1.7, 2.0).v == doctest::Approx(1.7));
  CHECK(pair[1].eta(1.7, 2.0).v == doctest::Approx(1.0));  // x/2 at x = 2

  // a = e^{lambda t}: field e^{lambda t} (d/dt + (lambda/2) x d/dx).
  const double l = 0.7;
  const auto expa = build_a(catalog_basis("const_neg", l), {1.0, 0.0, 0.0});
  const auto Xe = make_generators("ep_field", expa).front();
  CHECK(Xe.xi(0.4, 1.0).v == doctest::Approx(std::exp(l * 0.4)));
  CHECK(Xe.eta(0.4, 3.0).v == doctest::Approx(0.5 * l * std::exp(l * 0.4) * 3.0));

  // a = cos(lambda t): field cos d/dt - (lambda/2) sin x d/dx.
  const double m = 1.3;
  const auto cosa = build_a(catalog_basis("const_pos", m), {1.0, 0.0, -1.0});
  const auto Xc = make_generators("ep_field", cosa).front();
  CHECK(Xc.xi(0.4, 1.0).v == doctest::Approx(std::cos(m * 0.4)));
  CHECK(Xc.eta(0.4, 2.0).v == doctest::Approx(-0.5 * m * std::sin(m * 0.4) * 2.0));

  CHECK_THROWS_AS(make_generators("nonsense", one), std::invalid_argument);
  GeneratorParams bad;
  bad.n = 1.0;
  CHECK_THROWS_AS(make_generators("d2ks_field", one, bad), std::invalid_argument);
}

TEST_CASE("triple commutation table holds over every catalog basis") {
  for (const auto& [family, param] : kCatalog) {
    CAPTURE(family);
    const auto sol = positive_solution(family, param);
    const auto T = make_generators("sl2_triple", sol);
    const auto& X1 = T[0];
    const auto& X2 = T[1];
    const auto& X3 = T[2];

    auto expect = [&](const PointVectorField& A, const PointVectorField& B,
                      const PointVectorField& C, double scale) {
      for (double t : linspace(-0.8, 0.8, 5)) {
        for (double x : linspace(0.5, 2.0, 5)) {
          const auto [bxi, beta] = lie_bracket(A, B, t, x);
          CHECK(std::fabs(bxi - scale * C.xi(t, x).v) <= 1e-8);
          CHECK(std::fabs(beta - scale * C.eta(t, x).v) <= 1e-8);
        }
      }
    };
    expect(X1, X2, X1, 1.0);
    expect(X1, X3, X2, 2.0);
    expect(X2, X3, X3, 1.0);
  }
}

TEST_CASE("quadrature-bearing generators refuse nonpositive a") {
  // a = cos 2t turns negative inside the evaluation range.
  const auto sol = build_a(catalog_basis("const_pos", 2.0), {1.0, 0.0, -1.0});
  const auto pair = make_generators("affine_pair", sol);
  CHECK_THROWS_AS(pair[1].xi(1.5, 1.0), std::domain_error);
}

TEST_CASE("transformed-equation generator values") {
  const auto sol = build_a(catalog_basis("ince", 0.5), {1.5, 0.0, 0.5});
  GeneratorParams gp;
  gp.n = 3.0;
  gp.r = constant_fn(0.3);
  const auto X = make_generators("d2ks_field", sol, gp).front();
  const double t = 0.6, w = 1.4;
  const double a = 1.0 + 0.5 * std::cos(2.0 * t);
  const double da = -std::sin(2.0 * t);
  CHECK(X.xi(t, w).v == doctest::Approx(a));
  CHECK(X.eta(t, w).v == doctest::Approx((2.0 / (1.0 - 3.0)) * (da - a * 0.3) * w));
}

TEST_CASE("stored partials agree with finite differences of the values") {
  const auto sol = positive_solution("ince", 0.5);
  for (const auto& X : make_generators("sl2_triple", sol))
    CHECK(check_partials(X, linspace(-0.8, 0.8, 5), linspace(0.5, 2.0, 4)) <= 1e-5);
  CHECK(check_partials(dilation_field(), {0.0, 1.0}, {0.5, 1.5}) <= 1e-10);
}
