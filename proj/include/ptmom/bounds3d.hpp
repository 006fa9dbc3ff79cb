#pragma once

// Tight p4 bounds over region A: the quartic objective P(s|p2,p3), its
// stationary-root structure, the candidate-set optimization, the dividing
// surface F, and the (p2,p3,p4) classifier.
//
// The chain: det(rho^Gamma) = (3 p2^2 - 6 p2 + 8 p3 - 6 p4 + 1)/24 turns
// bounding p4 into optimizing Phi = (1-s) x y z = -P(s) over the admissible
// s interval; P' is a cubic whose roots r1 >= r2 >= r3 satisfy r3 <= 3/4 <=
// r1 and r2 in [1/2, 1], so the extremes sit in the four-element candidate
// set {P(s_max), P(min(r1, s_max)), P(max(s_min, r2)), P(s_min)}.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "ptmom/polyroots.hpp"
#include "ptmom/srange.hpp"

namespace ptmom {

// P(s|p2,p3) = s^4 - 3 s^3 + (7-p2)/2 s^2 + (3 p2 + 2 p3 - 11)/6 s + (1-p3)/3.
inline double P_value(double s, const MomentPair& pr) {
  return (((s - 3.0) * s + (7.0 - pr.p2) / 2.0) * s + (3.0 * pr.p2 + 2.0 * pr.p3 - 11.0) / 6.0) *
             s +
         (1.0 - pr.p3) / 3.0;
}

struct DeltaPQ {
  double delta{0.0};  // (1/576)(p3 - f+)(p3 - f-), zero exactly on the boundary
  double p{0.0};      // (1 - 4 p2)/16
  double q{0.0};      // (1 - 6 p2 + 8 p3)/96
};

// Discriminant data of the stationary cubic. Both the (q/2)^2 + (p/3)^3 form
// and the factorized form are evaluated and cross-checked.
inline DeltaPQ delta_and_pq(const MomentPair& pr) {
  if (!in_region_A(pr)) throw std::domain_error("delta_and_pq: (p2, p3) outside region A");
  DeltaPQ out;
  out.p = (1.0 - 4.0 * pr.p2) / 16.0;
  out.q = (1.0 - 6.0 * pr.p2 + 8.0 * pr.p3) / 96.0;
  const double direct = 0.25 * out.q * out.q + (out.p / 3.0) * (out.p / 3.0) * (out.p / 3.0);
  const double p2c = std::min(1.0, std::max(0.25, pr.p2));
  const auto [flo, fhi] = f_bounds(p2c);
  const double factored = (pr.p3 - fhi) * (pr.p3 - flo) / 576.0;
  if (std::abs(direct - factored) > 1e-13)
    throw std::logic_error("delta_and_pq: discriminant forms disagree");
  out.delta = factored;
  return out;
}

struct StationaryRoots {
  double r1{0.0}, r2{0.0}, r3{0.0};  // descending zeros of dP/ds
  double delta{0.0};
  std::optional<double> theta;  // in [0, pi/3]; absent at the p2 = 1/4 corner
};

// Zeros of dP/ds = 4 s^3 - 9 s^2 + (7 - p2) s + (3 p2 + 2 p3 - 11)/6, via the
// shift s = t + 3/4. Inputs are clamped onto A so that pairs sitting on the
// boundary within the membership band resolve to the double-root forms.
inline StationaryRoots stationary_roots(const MomentPair& pr) {
  if (!in_region_A(pr)) throw std::domain_error("stationary_roots: (p2, p3) outside region A");
  const double p2 = std::min(1.0, std::max(0.25, pr.p2));
  const auto [flo, fhi] = f_bounds(p2);
  const double p3 = std::min(fhi, std::max(flo, pr.p3));

  StationaryRoots out;
  const double p = (1.0 - 4.0 * p2) / 16.0;
  const double q = (1.0 - 6.0 * p2 + 8.0 * p3) / 96.0;
  out.delta = (p3 - fhi) * (p3 - flo) / 576.0;

  const double u = 4.0 * p2 - 1.0;
  if (u <= 1e-14) {
    out.r1 = out.r2 = out.r3 = 0.75;
    return out;
  }

  const double arg = std::sqrt(3.0) * (6.0 * p2 - 8.0 * p3 - 1.0) / (u * std::sqrt(u));
  out.theta = std::acos(std::max(-1.0, std::min(1.0, arg))) / 3.0;

  const CubicRoots cr = solve_depressed_cubic(DepressedCubic{p, q});
  if (cr.kind == CubicCase::OneReal) {
    // Cannot occur for pairs in A; reachable only through rounding just
    // outside the boundary, where the double-root forms are the limit.
    const double s3u = std::sqrt(3.0 * u);
    if (q > 0.0) {
      out.r1 = out.r2 = (9.0 + s3u) / 12.0;
      out.r3 = (9.0 - 2.0 * s3u) / 12.0;
    } else {
      out.r1 = (9.0 + 2.0 * s3u) / 12.0;
      out.r2 = out.r3 = (9.0 - s3u) / 12.0;
    }
    return out;
  }
  const auto rr = cr.with_multiplicity();
  out.r1 = rr[0] + 0.75;
  out.r2 = rr[1] + 0.75;
  out.r3 = rr[2] + 0.75;
  if (cr.kind == CubicCase::Triple) out.r1 = out.r2 = out.r3 = cr.roots[0] + 0.75;
  return out;
}

// F(p2,p3) = (3 p2^2 - 6 p2 + 8 p3 + 1)/6; the locus p4 = F is det = 0.
inline double dividing_surface(const MomentPair& pr) {
  return (3.0 * pr.p2 * pr.p2 - 6.0 * pr.p2 + 8.0 * pr.p3 + 1.0) / 6.0;
}

// Global envelope S- = F - 1/64, S+ = F + 1/4.
inline std::pair<double, double> envelope(const MomentPair& pr) {
  const double f = dividing_surface(pr);
  return {f - 1.0 / 64.0, f + 0.25};
}

struct BoundsResult {
  double m{0.0}, M{0.0};            // det extremes over the fibre
  double F_minus{0.0}, F_mid{0.0}, F_plus{0.0};
  double s_at_min{0.0};             // argmin_s P: witness for F_minus
  double s_at_max{0.0};             // argmax_s P: witness for F_plus
  SRange srange{};
};

// Full output of the p4-bound procedure for one pair.
inline BoundsResult p4_bounds(const MomentPair& pr) {
  if (!in_region_A(pr)) throw std::domain_error("p4_bounds: (p2, p3) outside region A");
  BoundsResult out;
  out.srange = s_range(pr);
  const StationaryRoots st = stationary_roots(pr);

  // Stationary roots clamped into [s_min, s_max] from both sides: a root
  // outside the admissible interval can never witness an extreme there
  // (the point (1, 1/4) has r1 = 5/4 below its s_min = 3/2).
  auto clamp_s = [&](double s) {
    return std::min(out.srange.s_max, std::max(out.srange.s_min, s));
  };
  const double cand[4] = {out.srange.s_max, clamp_s(st.r1), clamp_s(st.r2),
                          out.srange.s_min};
  double minP = P_value(cand[0], pr), maxP = minP;
  out.s_at_min = out.s_at_max = cand[0];
  for (int i = 1; i < 4; ++i) {
    const double v = P_value(cand[i], pr);
    if (v < minP) {
      minP = v;
      out.s_at_min = cand[i];
    }
    if (v > maxP) {
      maxP = v;
      out.s_at_max = cand[i];
    }
  }
  out.M = -minP;
  out.m = -maxP;
  out.F_mid = dividing_surface(pr);
  out.F_minus = out.F_mid + 4.0 * minP;
  out.F_plus = out.F_mid + 4.0 * maxP;
  return out;
}

enum class TripleClass { Separable, Entangled, Infeasible };

inline constexpr double kDefaultClassifyBand = 1e-9;
inline constexpr double kFeasibilitySlack = 1e-8;

// Classification given precomputed bounds (hot-loop form).
inline TripleClass classify_with_bounds(const BoundsResult& b, double p4,
                                        double eps = kDefaultClassifyBand) {
  if (p4 < b.F_minus - kFeasibilitySlack || p4 > b.F_plus + kFeasibilitySlack)
    return TripleClass::Infeasible;
  if (p4 > b.F_mid + eps) return TripleClass::Entangled;
  return TripleClass::Separable;
}

// p4 on the dividing surface classifies Separable (closed inequality).
inline TripleClass classify_triple(double p2, double p3, double p4,
                                   double eps = kDefaultClassifyBand) {
  const MomentPair pr{p2, p3};
  if (!in_region_A(pr)) return TripleClass::Infeasible;
  return classify_with_bounds(p4_bounds(pr), p4, eps);
}

}  // namespace ptmom
