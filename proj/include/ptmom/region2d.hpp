#pragma once

// The 2D feasible region A of (p2, p3): boundary functions f+-, the dividing
// curve phi4, membership, and the two-moment entanglement test.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ptmom {

struct MomentPair {
  double p2{0.0}, p3{0.0};
};

namespace detail {
// (4 p2 - 1)^{3/2} with negative rounding at p2 = 1/4 absorbed.
inline double pow32_4p2m1(double p2) {
  const double u = std::max(0.0, 4.0 * p2 - 1.0);
  return u * std::sqrt(u);
}
constexpr double kRegionBand = 1e-9;
}  // namespace detail

// f+-(p2) = [3(6 p2 - 1) +- sqrt(3) (4 p2 - 1)^{3/2}] / 24 for p2 in [1/4, 1].
inline std::pair<double, double> f_bounds(double p2) {
  if (p2 < 0.25 - 1e-12 || p2 > 1.0 + 1e-12)
    throw std::domain_error("f_bounds: p2 must be in [1/4, 1]");
  constexpr double sqrt3 = 1.7320508075688772935274463415059;
  const double base = 3.0 * (6.0 * p2 - 1.0);
  const double wing = sqrt3 * detail::pow32_4p2m1(p2);
  return {(base - wing) / 24.0, (base + wing) / 24.0};
}

// Three-branch dividing curve between separable- and entangled-attainable
// pairs; continuous across the junctions p2 = 1/3 and p2 = 1/2.
inline double phi4(double p2) {
  if (p2 < 0.25 - 1e-12 || p2 > 1.0 + 1e-12)
    throw std::domain_error("phi4: p2 must be in [1/4, 1]");
  if (p2 >= 0.5) return (3.0 * p2 - 1.0) / 2.0;
  if (p2 >= 1.0 / 3.0) {
    constexpr double sqrt2 = 1.4142135623730950488016887242097;
    const double u = std::max(0.0, 3.0 * p2 - 1.0);
    return (2.0 * (9.0 * p2 - 2.0) - sqrt2 * u * std::sqrt(u)) / 18.0;
  }
  return f_bounds(p2).first;
}

// Membership in A with an inclusive 1e-9 band so exact-boundary families
// (Werner, analytic reference points) classify as members.
inline bool in_region_A(const MomentPair& pr) {
  if (pr.p2 < 0.25 - detail::kRegionBand || pr.p2 > 1.0 + detail::kRegionBand) return false;
  const double p2c = std::min(1.0, std::max(0.25, pr.p2));
  const auto [lo, hi] = f_bounds(p2c);
  return pr.p3 >= lo - detail::kRegionBand && pr.p3 <= hi + detail::kRegionBand;
}

enum class Classification2D { CertifiedEntangled, Inconclusive, Infeasible };

// p3 < phi4(p2) certifies entanglement from two moments alone.
inline Classification2D classify_2d(const MomentPair& pr) {
  if (!in_region_A(pr)) return Classification2D::Infeasible;
  const double p2c = std::min(1.0, std::max(0.25, pr.p2));
  if (pr.p3 < phi4(p2c) - 1e-9) return Classification2D::CertifiedEntangled;
  return Classification2D::Inconclusive;
}

}  // namespace ptmom
