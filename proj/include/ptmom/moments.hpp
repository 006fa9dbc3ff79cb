#pragma once

// PT-moment computation and the moment -> spectrum pipeline: Newton
// identities, the determinant identity, quartic spectrum reconstruction,
// negativity, and the negativity/concurrence interval.

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ptmom/qstate.hpp"

namespace ptmom {

// Power sums p_k = Tr[(rho^Gamma)^k]; p1 = 1 for normalized states.
struct PTMomentVector {
  double p1{1.0}, p2{0.0}, p3{0.0}, p4{0.0};
};

// Eigenvalues of rho^Gamma in descending order.
struct Spectrum {
  std::array<double, 4> lambda{};
  double min() const { return lambda[3]; }
};

struct SymmetricFunctions {
  double e1{0.0}, e2{0.0}, e3{0.0}, e4{0.0};
};

// Moments as real parts of traces of matrix powers; no eigendecomposition.
inline PTMomentVector pt_moments(const PartialTranspose& gamma) {
  const Mat4& g = gamma.m;
  const Mat4 g2 = g * g;
  const Mat4 g3 = g2 * g;
  const Mat4 g4 = g2 * g2;
  const cplx t1 = g.trace(), t2 = g2.trace(), t3 = g3.trace(), t4 = g4.trace();
  const double imag_residue = std::max(std::max(std::abs(t1.imag()), std::abs(t2.imag())),
                                       std::max(std::abs(t3.imag()), std::abs(t4.imag())));
  if (imag_residue > 1e-10)
    throw std::logic_error("pt_moments: imaginary trace residue " + std::to_string(imag_residue) +
                           " (non-Hermitian input)");
  return {t1.real(), t2.real(), t3.real(), t4.real()};
}

// Closed forms for the Werner family rho_W(w).
inline PTMomentVector werner_moments(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("werner_moments: w must be in [0,1]");
  const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
  return {1.0, (1.0 + 3.0 * w2) / 4.0, (-6.0 * w3 + 9.0 * w2 + 1.0) / 16.0,
          (21.0 * w4 - 24.0 * w3 + 18.0 * w2 + 1.0) / 64.0};
}

// Closed forms for the Bell-diagonal family in (t1, t2, t3).
inline PTMomentVector bell_diagonal_moments(const BellDiagonalParams& t) {
  const auto c = bell_constraint_values(t);
  for (double v : c)
    if (v < -1e-12) throw std::domain_error("bell_diagonal_moments: invalid parameters");
  const double s2 = t.t1 * t.t1 + t.t2 * t.t2 + t.t3 * t.t3;
  const double s4 = t.t1 * t.t1 * t.t1 * t.t1 + t.t2 * t.t2 * t.t2 * t.t2 +
                    t.t3 * t.t3 * t.t3 * t.t3;
  const double prod = t.t1 * t.t2 * t.t3;
  const double pair2 = t.t1 * t.t1 * t.t2 * t.t2 + t.t1 * t.t1 * t.t3 * t.t3 +
                       t.t2 * t.t2 * t.t3 * t.t3;
  return {1.0, (1.0 + s2) / 4.0, (1.0 + 6.0 * prod + 3.0 * s2) / 16.0,
          (1.0 + 24.0 * prod + 6.0 * s2 + s4 + 6.0 * pair2) / 64.0};
}

// Newton recursion e_k from p_k (equivalent to the k x k determinant form,
// which the tests keep as an oracle).
inline SymmetricFunctions elementary_symmetric(const PTMomentVector& p) {
  const auto e = detail::elementary_from_power_sums({p.p1, p.p2, p.p3, p.p4});
  return {e[0], e[1], e[2], e[3]};
}

// det(rho^Gamma) = (3 p2^2 - 6 p2 + 8 p3 - 6 p4 + 1) / 24.
inline double det_from_moments(const PTMomentVector& p) {
  return (3.0 * p.p2 * p.p2 - 6.0 * p.p2 + 8.0 * p.p3 - 6.0 * p.p4 + 1.0) / 24.0;
}

// Spectrum as the roots of x^4 - e1 x^3 + e2 x^2 - e3 x + e4.
inline Spectrum reconstruct_spectrum(const PTMomentVector& p) {
  if (std::abs(p.p1 - 1.0) > 1e-10)
    throw std::domain_error("reconstruct_spectrum: p1 must equal 1");
  const auto res = detail::spectrum_from_power_sums({p.p1, p.p2, p.p3, p.p4});
  if (res.max_imag > 1e-7)
    throw std::domain_error(
        "reconstruct_spectrum: moments inconsistent with any two-qubit state (imaginary residue " +
        std::to_string(res.max_imag) + ")");
  return Spectrum{res.lambda};
}

// N = max(0, -2 lambda_min); vanishes exactly on two-qubit separable states.
inline double negativity(const Spectrum& spec) { return std::max(0.0, -2.0 * spec.lambda[3]); }

// Interval of concurrences compatible with negativity n, from
// sqrt((1-C)^2 + C^2) - (1-C) <= N <= C. The lower endpoint is n itself; the
// upper solves the left relation, whose left side increases strictly in C.
inline std::pair<double, double> concurrence_interval(double n) {
  if (!(n >= 0.0 && n <= 1.0))
    throw std::domain_error("concurrence_interval: negativity must be in [0,1]");
  auto lhs = [](double c) {
    return std::sqrt((1.0 - c) * (1.0 - c) + c * c) - (1.0 - c);
  };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < n)
      lo = mid;
    else
      hi = mid;
  }
  // Bisection can land a hair below n at the endpoints; the interval is
  // [n, C_max] with C_max >= n always.
  return {n, std::max(n, 0.5 * (lo + hi))};
}

}  // namespace ptmom
