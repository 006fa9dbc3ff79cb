#pragma once

// Real-coefficient cubic and quartic solvers used throughout the library to
// turn characteristic polynomials back into eigenvalues.
//
// The depressed-cubic solver follows the classical case analysis:
//   p < 0, D < 0   three distinct real roots, trigonometric form
//   p < 0, D ~ 0   one simple root 3q/p and one double root -3q/(2p)
//   otherwise      exactly one real root, stable Cardano evaluation
// The near-zero band on the discriminant is relative to the magnitude of the
// two contributions (q/2)^2 and (p/3)^3, so boundary inputs that cancel to
// rounding noise are classified as double roots while genuinely small
// coefficients are not misrouted into the 3q/p formulas.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ptmom {

struct DepressedCubic {
  double p{0.0};  // t^3 + p t + q
  double q{0.0};
};

enum class CubicCase { OneReal, SimplePlusDouble, ThreeDistinct, Triple };

struct CubicRoots {
  CubicCase kind{CubicCase::OneReal};
  int count{0};                          // distinct real roots stored
  std::array<double, 3> roots{};         // descending
  std::array<int, 3> mults{};            // multiplicity per stored root
  double delta{0.0};                     // (q/2)^2 + (p/3)^3

  // Roots expanded with multiplicity (defined only when all roots are real).
  std::array<double, 3> with_multiplicity() const {
    std::array<double, 3> out{};
    int k = 0;
    for (int i = 0; i < count; ++i)
      for (int m = 0; m < mults[i] && k < 3; ++m) out[k++] = roots[i];
    std::sort(out.begin(), out.begin() + k, std::greater<double>());
    return out;
  }
};

namespace detail {

inline double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

inline double cubic_value(double p, double q, double t) { return (t * t + p) * t + q; }

// One Newton step on t^3 + p t + q, skipped when the slope vanishes.
inline double polish_depressed(double p, double q, double t) {
  for (int it = 0; it < 2; ++it) {
    const double f = cubic_value(p, q, t);
    const double d = 3.0 * t * t + p;
    if (d == 0.0 || !std::isfinite(f / d)) break;
    const double step = f / d;
    if (std::abs(step) > 0.5 * (1.0 + std::abs(t))) break;
    t -= step;
  }
  return t;
}

}  // namespace detail

inline CubicRoots solve_depressed_cubic(const DepressedCubic& c) {
  const double p = c.p, q = c.q;
  const double half_q_sq = 0.25 * q * q;
  const double third_p_cu = (p / 3.0) * (p / 3.0) * (p / 3.0);
  const double delta = half_q_sq + third_p_cu;
  const double scale = half_q_sq + std::abs(third_p_cu);

  CubicRoots out;
  out.delta = delta;

  if (scale == 0.0) {
    // p = q = 0 (up to underflow): triple root at the origin.
    out.kind = CubicCase::Triple;
    out.count = 1;
    out.roots[0] = std::cbrt(-q);
    out.mults[0] = 3;
    return out;
  }

  if (std::abs(delta) <= 1e-12 * scale) {
    // Double-root boundary. Cancellation forces p < 0 here, so the closed
    // forms are well conditioned.
    const double simple = 3.0 * q / p;
    const double dbl = -1.5 * q / p;
    out.kind = CubicCase::SimplePlusDouble;
    out.count = 2;
    if (simple >= dbl) {
      out.roots = {simple, dbl, 0.0};
      out.mults = {1, 2, 0};
    } else {
      out.roots = {dbl, simple, 0.0};
      out.mults = {2, 1, 0};
    }
    return out;
  }

  if (delta > 0.0) {
    // One real root. Evaluate the larger cube root first and recover the
    // other from u*v = -p/3 to avoid cancellation.
    const double sd = std::sqrt(delta);
    double u, v;
    if (q <= 0.0) {
      u = std::cbrt(-0.5 * q + sd);
      v = (u != 0.0) ? -p / (3.0 * u) : std::cbrt(-0.5 * q - sd);
    } else {
      v = std::cbrt(-0.5 * q - sd);
      u = (v != 0.0) ? -p / (3.0 * v) : std::cbrt(-0.5 * q + sd);
    }
    out.kind = CubicCase::OneReal;
    out.count = 1;
    out.roots[0] = detail::polish_depressed(p, q, u + v);
    out.mults[0] = 1;
    return out;
  }

  // Three distinct real roots (delta < 0 implies p < 0).
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = detail::clamp_unit(3.0 * q / (p * m));
  const double theta = std::acos(arg);
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double r0 = m * std::cos(theta / 3.0);
  const double r1 = m * std::cos((theta + two_pi) / 3.0);
  const double r2 = m * std::cos((theta + 2.0 * two_pi) / 3.0);
  out.kind = CubicCase::ThreeDistinct;
  out.count = 3;
  out.roots = {detail::polish_depressed(p, q, r0), detail::polish_depressed(p, q, r2),
               detail::polish_depressed(p, q, r1)};
  std::sort(out.roots.begin(), out.roots.end(), std::greater<double>());
  out.mults = {1, 1, 1};
  return out;
}

// Roots of x^3 + a2 x^2 + a1 x + a0 via the shift x = t - a2/3.
inline CubicRoots solve_cubic(double a2, double a1, double a0) {
  const double shift = a2 / 3.0;
  DepressedCubic d;
  d.p = a1 - a2 * shift;
  d.q = a0 + shift * (2.0 * shift * shift - a1);
  CubicRoots r = solve_depressed_cubic(d);
  for (int i = 0; i < r.count; ++i) r.roots[i] -= shift;
  return r;
}

struct QuadraticFactor {
  double b{0.0}, c{0.0};  // quotient x^2 + b x + c
  bool complex_pair{false};
  std::array<std::complex<double>, 2> roots{};
};

// Divide x^3 + a2 x^2 + a1 x + a0 by a known real root gamma; the quotient is
// x^2 + (a2 + gamma) x - a0/gamma and the remaining pair comes from the
// quadratic formula.
inline QuadraticFactor deflate_by_root(double a2, double a1, double a0, double gamma) {
  if (a0 == 0.0) throw std::invalid_argument("deflate_by_root: requires a0 != 0");
  const double residual = ((gamma + a2) * gamma + a1) * gamma + a0;
  const double rscale =
      1.0 + std::abs(gamma * gamma * gamma) + std::abs(a2 * gamma * gamma) + std::abs(a1 * gamma) + std::abs(a0);
  if (std::abs(residual) > 1e-8 * rscale)
    throw std::invalid_argument("deflate_by_root: gamma is not a root (residual too large)");

  QuadraticFactor f;
  f.b = a2 + gamma;
  f.c = -a0 / gamma;
  const double disc = f.b * f.b - 4.0 * f.c;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // Larger-magnitude root first, partner via c = r0*r1.
    const double r0 = (f.b >= 0.0) ? (-f.b - sq) / 2.0 : (-f.b + sq) / 2.0;
    const double r1 = (r0 != 0.0) ? f.c / r0 : -f.b - r0;
    f.roots[0] = std::max(r0, r1);
    f.roots[1] = std::min(r0, r1);
  } else {
    f.complex_pair = true;
    const double im = std::sqrt(-disc) / 2.0;
    f.roots[0] = {-f.b / 2.0, im};
    f.roots[1] = {-f.b / 2.0, -im};
  }
  return f;
}

namespace detail {

inline std::complex<double> quartic_value(double c3, double c2, double c1, double c0,
                                          std::complex<double> x) {
  return (((x + c3) * x + c2) * x + c1) * x + c0;
}

inline std::complex<double> quartic_slope(double c3, double c2, double c1,
                                          std::complex<double> x) {
  return ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
}

}  // namespace detail

// Ferrari resolution of x^4 + c3 x^3 + c2 x^2 + c1 x + c0, roots polished by
// two Newton iterations and returned in descending order of real part.
inline std::array<std::complex<double>, 4> solve_quartic_monic(double c3, double c2, double c1,
                                                               double c0) {
  using cd = std::complex<double>;
  // Depress: x = y - c3/4.
  const double a = c3 / 4.0;
  const double p = c2 - 6.0 * a * a;
  const double q = c1 - 2.0 * c2 * a + 8.0 * a * a * a;
  const double r = c0 - c1 * a + c2 * a * a - 3.0 * a * a * a * a;

  std::array<cd, 4> y{};
  if (std::abs(q) <= 1e-14 * (1.0 + std::abs(p) + std::sqrt(std::abs(r)))) {
    // Biquadratic.
    const cd disc = cd(p * p - 4.0 * r, 0.0);
    const cd s = std::sqrt(disc);
    const cd u0 = (-p + s) / 2.0, u1 = (-p - s) / 2.0;
    const cd r0 = std::sqrt(u0), r1 = std::sqrt(u1);
    y = {r0, -r0, r1, -r1};
  } else {
    // Resolvent cubic 4(2m - p)(m^2 - r) = q^2; take the root that keeps
    // 2m - p safely nonnegative.
    const CubicRoots res = solve_cubic(-0.5 * p, -r, 0.5 * p * r - 0.125 * q * q);
    double m = res.roots[0];
    for (int i = 1; i < res.count; ++i)
      if (2.0 * res.roots[i] - p > 2.0 * m - p) m = res.roots[i];
    const double alpha2 = std::max(0.0, 2.0 * m - p);
    const double alpha = std::sqrt(alpha2);
    double beta;
    if (alpha > 1e-150)
      beta = q / (2.0 * alpha);
    else
      beta = std::sqrt(std::max(0.0, m * m - r));
    // (y^2 + m)^2 - (alpha y - beta)^2 = 0 splits into two real quadratics.
    const double b1 = -alpha, k1 = m + beta;
    const double b2 = alpha, k2 = m - beta;
    auto quad = [](double b, double k, cd* out) {
      const double disc = b * b - 4.0 * k;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double r0 = (b >= 0.0) ? (-b - sq) / 2.0 : (-b + sq) / 2.0;
        const double r1 = (r0 != 0.0) ? k / r0 : -b - r0;
        out[0] = r0;
        out[1] = r1;
      } else {
        const double im = std::sqrt(-disc) / 2.0;
        out[0] = {-b / 2.0, im};
        out[1] = {-b / 2.0, -im};
      }
    };
    quad(b1, k1, y.data());
    quad(b2, k2, y.data() + 2);
  }

  std::array<cd, 4> x{};
  for (int i = 0; i < 4; ++i) {
    cd z = y[i] - a;
    for (int it = 0; it < 2; ++it) {
      const cd f = detail::quartic_value(c3, c2, c1, c0, z);
      const cd d = detail::quartic_slope(c3, c2, c1, z);
      if (std::abs(d) == 0.0) break;
      const cd step = f / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(z))) break;
      z -= step;
    }
    x[i] = z;
  }
  std::sort(x.begin(), x.end(),
            [](const cd& u, const cd& v) { return u.real() > v.real(); });
  return x;
}

}  // namespace ptmom
