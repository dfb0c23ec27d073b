#pragma once

#include <cmath>

namespace ermakov {

/// Value and first three derivatives of a scalar function at one point.
/// The operators below implement truncated Taylor (jet) calculus to order 3;
/// every analytic chain-rule derivative in the library is built from them,
/// so closed-form solutions carry exact derivatives instead of FD estimates.
struct Jet3 {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

constexpr Jet3 jet_const(double c) { return {c, 0.0, 0.0, 0.0}; }
constexpr Jet3 jet_var(double t) { return {t, 1.0, 0.0, 0.0}; }

constexpr Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
constexpr Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
constexpr Jet3 operator-(const Jet3& a) { return {-a.f, -a.d1, -a.d2, -a.d3}; }
constexpr Jet3 operator+(const Jet3& a, double c) { return {a.f + c, a.d1, a.d2, a.d3}; }
constexpr Jet3 operator+(double c, const Jet3& a) { return a + c; }
constexpr Jet3 operator-(const Jet3& a, double c) { return a + (-c); }
constexpr Jet3 operator-(double c, const Jet3& a) { return (-a) + c; }
constexpr Jet3 operator*(const Jet3& a, double c) {
  return {a.f * c, a.d1 * c, a.d2 * c, a.d3 * c};
}
constexpr Jet3 operator*(double c, const Jet3& a) { return a * c; }

/// Leibniz rule through order 3.
constexpr Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.f * b.f,
          a.d1 * b.f + a.f * b.d1,
          a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
          a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3};
}

/// Reciprocal jet; caller guarantees a.f != 0.
constexpr Jet3 inv(const Jet3& a) {
  const double g = 1.0 / a.f;
  const double g2 = g * g;
  return {g,
          -a.d1 * g2,
          (2.0 * a.d1 * a.d1 - a.f * a.d2) * g2 * g,
          (-6.0 * a.d1 * a.d1 * a.d1 + 6.0 * a.f * a.d1 * a.d2 - a.f * a.f * a.d3) * g2 * g2};
}
constexpr Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inv(b); }
constexpr Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / c); }
constexpr Jet3 operator/(double c, const Jet3& a) { return inv(a) * c; }

/// Chain rule: outer scalar function given by its derivatives at g.f.
constexpr Jet3 compose(double p0, double p1, double p2, double p3, const Jet3& g) {
  return {p0,
          p1 * g.d1,
          p2 * g.d1 * g.d1 + p1 * g.d2,
          p3 * g.d1 * g.d1 * g.d1 + 3.0 * p2 * g.d1 * g.d2 + p1 * g.d3};
}

inline Jet3 sqrt(const Jet3& g) {
  const double s = std::sqrt(g.f);
  return compose(s, 0.5 / s, -0.25 / (s * g.f), 0.375 / (s * g.f * g.f), g);
}

/// Real power; caller guarantees g.f > 0.
inline Jet3 pow(const Jet3& g, double alpha) {
  const double p0 = std::pow(g.f, alpha);
  const double p1 = alpha * p0 / g.f;
  const double p2 = (alpha - 1.0) * p1 / g.f;
  const double p3 = (alpha - 2.0) * p2 / g.f;
  return compose(p0, p1, p2, p3, g);
}

inline Jet3 exp(const Jet3& g) {
  const double e = std::exp(g.f);
  return compose(e, e, e, e, g);
}

inline Jet3 log(const Jet3& g) {
  const double u = 1.0 / g.f;
  return compose(std::log(g.f), u, -u * u, 2.0 * u * u * u, g);
}

inline Jet3 sin(const Jet3& g) {
  const double s = std::sin(g.f), c = std::cos(g.f);
  return compose(s, c, -s, -c, g);
}

inline Jet3 cos(const Jet3& g) {
  const double s = std::sin(g.f), c = std::cos(g.f);
  return compose(c, -s, -c, s, g);
}

inline Jet3 tan(const Jet3& g) {
  const double T = std::tan(g.f);
  const double q = 1.0 + T * T;
  return compose(T, q, 2.0 * T * q, 2.0 * q * (1.0 + 3.0 * T * T), g);
}

inline Jet3 atan(const Jet3& g) {
  const double q = 1.0 / (1.0 + g.f * g.f);
  return compose(std::atan(g.f), q, -2.0 * g.f * q * q,
                 (6.0 * g.f * g.f - 2.0) * q * q * q, g);
}

}  // namespace ermakov
