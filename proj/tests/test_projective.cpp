#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ermakov/errors.hpp"
#include "ermakov/projective.hpp"
#include "support.hpp"

using namespace ermakov;

namespace {

const std::vector<std::pair<std::string, double>> kCatalog = {
    {"free", 0.0}, {"const_neg", 0.7}, {"const_pos", 1.3}, {"ince", 0.5}};

}  // namespace

TEST_CASE("superposition examples carry the advertised first integral") {
  const auto free_sol = build_a(catalog_basis("free"), {1.0, 0.0, 0.0});
  CHECK(free_sol.a.value(3.0) == doctest::Approx(9.0));
  CHECK(free_sol.K == 0.0);

  const double alpha = 0.5;
  const auto ince_sol =
      build_a(catalog_basis("ince", alpha), {1.0 + alpha, 0.0, 1.0 - alpha});
  CHECK(ince_sol.a.value(0.7) ==
        doctest::Approx(1.0 + alpha * std::cos(1.4)).epsilon(1e-12));
  CHECK(ince_sol.K == doctest::Approx(0.75));

  const double l = 2.0;
  const auto cos_sol = build_a(catalog_basis("const_pos", l), {1.0, 0.0, -1.0});
  CHECK(cos_sol.a.value(0.4) == doctest::Approx(std::cos(l * 0.4)).epsilon(1e-12));
  CHECK(cos_sol.K == doctest::Approx(-l * l / 4.0));

  CHECK_THROWS_AS(build_a(catalog_basis("free"), {0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("every superposition solves the third-order equation") {
  for (const auto& [family, param] : kCatalog) {
    CAPTURE(family);
    const HillBasis b = catalog_basis(family, param);
    for (const ProjectiveCoeffs& c :
         {ProjectiveCoeffs{1, 0, 0}, ProjectiveCoeffs{0, 1, 0},
          ProjectiveCoeffs{0, 0, 1}, ProjectiveCoeffs{0.3, -1.1, 2.0}}) {
      const auto sol = build_a(b, c);
      for (double t : linspace(-1.5, 1.5, 7))
        CHECK(std::fabs(residual_M(sol.a, b.p, t)) <= 1e-9);
    }
  }
}

TEST_CASE("non-solutions produce a nonzero residual") {
  const TimeFn t = coordinate_fn();
  CHECK(residual_M(t * t * t, constant_fn(0.0), 2.0) == doctest::Approx(6.0));
}

TEST_CASE("first integral matches its coefficient expression pointwise") {
  auto rng = testsupport::make_rng();
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [family, param] = kCatalog[static_cast<std::size_t>(trial) % kCatalog.size()];
    const HillBasis b = catalog_basis(family, param);
    const ProjectiveCoeffs c{testsupport::uniform(rng, -2.0, 2.0),
                             testsupport::uniform(rng, -2.0, 2.0),
                             testsupport::uniform(rng, -2.0, 2.0)};
    if (c.A == 0.0 && c.B == 0.0 && c.C == 0.0) continue;
    const auto sol = build_a(b, c);

    double mean = 0.0, m2 = 0.0;
    int n = 0;
    for (double t : linspace(-1.0, 1.0, 21)) {
      const double K = first_integral_K(sol.a, b.p, t);
      CHECK(std::fabs(K - sol.K) <= 1e-10 * (1.0 + std::fabs(sol.K)));
      ++n;
      const double d = K - mean;
      mean += d / n;
      m2 += d * (K - mean);
    }
    CHECK(std::sqrt(m2 / n) <= 1e-9);
  }
}

TEST_CASE("first integral worked values") {
  const TimeFn t = coordinate_fn();
  CHECK(first_integral_K(cos_fn(t), constant_fn(0.25), 0.9) ==
        doctest::Approx(-0.25));
  CHECK(first_integral_K(t * t, constant_fn(0.0), 1.7) == doctest::Approx(0.0));
}

TEST_CASE("triple Wronskian of the squared basis equals 2W^3") {
  for (const auto& [family, param] : kCatalog) {
    CAPTURE(family);
    const HillBasis b = catalog_basis(family, param);
    const TimeFn f1 = b.u1 * b.u1, f2 = b.u1 * b.u2, f3 = b.u2 * b.u2;
    for (double t : {-0.8, 0.3, 1.1}) {
      const Jet3 a = f1.jet(t), bb = f2.jet(t), c = f3.jet(t);
      const double det = a.f * (bb.d1 * c.d2 - bb.d2 * c.d1) -
                         bb.f * (a.d1 * c.d2 - a.d2 * c.d1) +
                         c.f * (a.d1 * bb.d2 - a.d2 * bb.d1);
      const double expect = 2.0 * b.W * b.W * b.W;
      CHECK(std::fabs(det - expect) <= 1e-9 * std::fabs(expect));
    }
  }
}

TEST_CASE("pairwise Wronskian of solutions is again a solution") {
  auto rng = testsupport::make_rng();
  for (const auto& [family, param] : kCatalog) {
    CAPTURE(family);
    const HillBasis b = catalog_basis(family, param);
    const auto s1 = build_a(b, {testsupport::uniform(rng, 0.5, 2.0),
                                testsupport::uniform(rng, -1.0, 1.0),
                                testsupport::uniform(rng, 0.5, 2.0)});
    const auto s2 = build_a(b, {testsupport::uniform(rng, -2.0, -0.5),
                                testsupport::uniform(rng, -1.0, 1.0),
                                testsupport::uniform(rng, 0.5, 2.0)});
    const auto w = wronskian_pair(s1, s2);
    for (double t : linspace(-1.0, 1.0, 9)) {
      CHECK(std::fabs(residual_M(w.a, b.p, t)) <= 1e-8);
      // The coefficient image of the pair bracket matches the direct Wronskian.
      const auto direct = build_a(b, w.coeffs);
      CHECK(w.a.value(t) == doctest::Approx(direct.a.value(t)).epsilon(1e-9));
    }
  }

  // Free-basis anchor: W(t^2, t) = -t^2.
  const HillBasis free_b = catalog_basis("free");
  const auto q = build_a(free_b, {1.0, 0.0, 0.0});
  const auto lin = build_a(free_b, {0.0, 0.5, 0.0});
  const auto w = wronskian_pair(q, lin);
  CHECK(w.a.value(2.0) == doctest::Approx(-4.0));
  CHECK(w.coeffs.A == doctest::Approx(-1.0));
  CHECK(w.coeffs.B == doctest::Approx(0.0));
  CHECK(w.coeffs.C == doctest::Approx(0.0));
}

TEST_CASE("quadrature of 1/a with closed-form anchors") {
  CHECK(s_of_t(constant_fn(1.0), 0.0, 3.0) == doctest::Approx(3.0));

  // a = cos t: s = log((1+tan(t/2))/(1-tan(t/2))).
  const TimeFn a_cos = cos_fn(coordinate_fn());
  CHECK(std::fabs(s_of_t(a_cos, 0.0, M_PI / 4.0) - 0.8813735870195429) <= 1e-9);

  // a = 1 + 0.5 cos 2t, frozen quadrature value at t = 1.
  const auto ince_sol = build_a(catalog_basis("ince", 0.5), {1.5, 0.0, 0.5});
  CHECK(std::fabs(s_of_t(ince_sol.a, 0.0, 1.0) - 0.8456521229740832) <= 1e-9);

  // Positivity enforcement: cos t turns negative past pi/2.
  CHECK_THROWS_AS(s_of_t(a_cos, 0.0, 2.0), std::domain_error);
}

TEST_CASE("quadrature packaged as a function of time") {
  const auto ince_sol = build_a(catalog_basis("ince", 0.5), {1.5, 0.0, 0.5});
  const TimeFn s = s_fn(ince_sol.a, 0.0, {-1.2, 1.2});
  CHECK(std::fabs(s.value(1.0) - 0.8456521229740832) <= 1e-9);
  CHECK(s.value(0.0) == doctest::Approx(0.0));
  // s' = 1/a and the higher channels follow the quotient rule.
  const auto check = check_derivatives(s, linspace(-0.9, 0.9, 7));
  CHECK(check.max_discrepancy <= 1e-6);
  CHECK(s.deriv(0.5, 1) == doctest::Approx(1.0 / ince_sol.a.value(0.5)));
}

TEST_CASE("initial data determine the superposition coefficients") {
  auto rng = testsupport::make_rng();
  for (const auto& [family, param] : kCatalog) {
    CAPTURE(family);
    const HillBasis b = catalog_basis(family, param);
    const ProjectiveCoeffs c{testsupport::uniform(rng, 0.5, 2.0),
                             testsupport::uniform(rng, -1.0, 1.0),
                             testsupport::uniform(rng, 0.5, 2.0)};
    const auto sol = build_a(b, c);
    const double t0 = 0.4;
    const auto fit = coeffs_from_values(b, t0, sol.a.value(t0), sol.a.deriv(t0, 1),
                                        sol.a.deriv(t0, 2));
    CHECK(fit.A == doctest::Approx(c.A).epsilon(1e-9));
    CHECK(fit.B == doctest::Approx(c.B).epsilon(1e-9));
    CHECK(fit.C == doctest::Approx(c.C).epsilon(1e-9));
  }
}
