#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ermakov/timefn.hpp"
#include "support.hpp"

using namespace ermakov;

namespace {

TimeFn raw(std::string label, TimeFn::JetFn fn, Interval dom = Interval{}) {
  return TimeFn(std::move(label), dom, std::move(fn));
}

}  // namespace

TEST_CASE("jet arithmetic matches expanded polynomials") {
  // (t^2+1)*(2t-3) expanded: 2t^3 - 3t^2 + 2t - 3
  const TimeFn f = polynomial_fn({1, 0, 1}) * polynomial_fn({-3, 2});
  const TimeFn g = polynomial_fn({-3, 2, -3, 2});
  for (double t : linspace(-2, 2, 9)) {
    const Jet3 a = f.jet(t), b = g.jet(t);
    CHECK(a.f == doctest::Approx(b.f).epsilon(1e-14));
    CHECK(a.d1 == doctest::Approx(b.d1).epsilon(1e-14));
    CHECK(a.d2 == doctest::Approx(b.d2).epsilon(1e-14));
    CHECK(a.d3 == doctest::Approx(b.d3).epsilon(1e-14));
  }
}

TEST_CASE("jet quotient and composition derivatives are exact") {
  // tan t == sin t / cos t, compare full jets
  const TimeFn tanq =
      raw("sin", [](double t) { return sin(jet_var(t)); }) /
      raw("cos", [](double t) { return cos(jet_var(t)); });
  const TimeFn tand = raw("tan", [](double t) { return tan(jet_var(t)); });
  for (double t : linspace(-1.2, 1.2, 11)) {
    const Jet3 a = tanq.jet(t), b = tand.jet(t);
    CHECK(a.d1 == doctest::Approx(b.d1).epsilon(1e-12));
    CHECK(a.d2 == doctest::Approx(b.d2).epsilon(1e-12));
    CHECK(a.d3 == doctest::Approx(b.d3).epsilon(1e-12));
  }
}

TEST_CASE("check_derivatives: exact jets pass tightly") {
  SUBCASE("quadratic at a single point") {
    const auto rep = check_derivatives(polynomial_fn({0, 0, 1}), {0.5}, 1e-4);
    CHECK(rep.max_discrepancy <= 1e-10);
  }
  SUBCASE("cosine on an 11-point grid") {
    const TimeFn f = raw("cos", [](double t) { return cos(jet_var(t)); });
    const auto rep = check_derivatives(f, linspace(0, 1, 11), 1e-4);
    CHECK(rep.max_discrepancy <= 1e-6);
  }
}

TEST_CASE("check_derivatives: flags a wrong derivative channel") {
  // value channel is cos t but the reported first derivative is off by 1
  const TimeFn broken = raw("broken", [](double t) {
    Jet3 j = cos(jet_var(t));
    j.d1 += 1.0;
    return j;
  });
  const auto rep = check_derivatives(broken, linspace(0.1, 0.9, 5), 1e-4);
  CHECK(rep.max_discrepancy > 0.1);
  CHECK(rep.worst_order == 1);
}

TEST_CASE("check_derivatives: boundary margin enforced") {
  const TimeFn f = raw(
      "cos", [](double t) { return cos(jet_var(t)); }, Interval{0.0, 1.0});
  CHECK_THROWS_AS((void)check_derivatives(f, {0.98}, 1e-4), std::domain_error);
  CHECK_NOTHROW((void)check_derivatives(f, {0.5}, 1e-4));
}

TEST_CASE("integrate: polynomial is exact") {
  CHECK(integrate(polynomial_fn({0, 0, 1}), 0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // reversed limits flip the sign
  CHECK(integrate(polynomial_fn({0, 0, 1}), 1, 0) ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("integrate: secant integral against brute-force Riemann oracle") {
  const TimeFn sec = raw("sec", [](double t) { return inv(cos(jet_var(t))); });
  const double got = integrate(sec, 0, M_PI / 4, 1e-12);
  // closed form ln(tan(3 pi/8)) and a crude midpoint-rule oracle
  CHECK(got == doctest::Approx(0.8813735870195429).epsilon(1e-11));
  double riemann = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * (M_PI / 4) / n;
    riemann += 1.0 / std::cos(t) * (M_PI / 4) / n;
  }
  CHECK(std::fabs(got - riemann) < 1e-7);
}

TEST_CASE("integrate: error taxonomy") {
  SUBCASE("non-finite integrand") {
    const TimeFn f = raw("1/t-raw", [](double t) { return jet_const(1.0 / t); });
    CHECK_THROWS_AS((void)integrate(f, -1, 1), NumericalError);
  }
  SUBCASE("quotient TimeFn reports the singular point") {
    const TimeFn f = constant_fn(1.0) / coordinate_fn();
    CHECK_THROWS_AS((void)integrate(f, -1, 1), SingularityError);
  }
  SUBCASE("refinement depth exhausted on an algebraic singularity") {
    // finite everywhere, but the local Simpson error shrinks like width^(1/2)
    // while the split tolerance shrinks like width, so refinement never wins
    const TimeFn f = raw("invsqrt", [](double t) {
      return jet_const(1.0 / std::sqrt(std::fabs(t - 1.0 / 3.0) + 1e-300));
    });
    CHECK_THROWS_AS((void)integrate(f, 0, 1, 1e-14), ConvergenceError);
  }
  SUBCASE("range outside domain") {
    const TimeFn f = raw(
        "narrow", [](double t) { return jet_const(t); }, Interval{0.0, 0.5});
    CHECK_THROWS_AS((void)integrate(f, 0, 1), std::domain_error);
  }
}

TEST_CASE("schwarzian: tan t has Schwarzian 2") {
  const TimeFn tanfn = raw("tan", [](double t) { return tan(jet_var(t)); });
  CHECK(schwarzian(tanfn, 0.3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(schwarzian(tanfn, -0.9) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("schwarzian: Moebius functions have Schwarzian zero") {
  const TimeFn moeb = polynomial_fn({1, 2}) / polynomial_fn({-3, 1});
  for (double t : {0.0, 1.0, 2.5})
    CHECK(std::fabs(schwarzian(moeb, t)) < 1e-12);
}

TEST_CASE("schwarzian: stationary point rejected") {
  const TimeFn sq = polynomial_fn({0, 0, 1});
  CHECK_THROWS_AS((void)schwarzian(sq, 0.0), SingularityError);
}

TEST_CASE("TimeFn domain is enforced on evaluation") {
  const TimeFn f = raw(
      "narrow", [](double t) { return jet_var(t); }, Interval{-1.0, 1.0});
  CHECK_THROWS_AS((void)f.value(2.0), std::domain_error);
  CHECK(f.value(0.5) == doctest::Approx(0.5));
}
