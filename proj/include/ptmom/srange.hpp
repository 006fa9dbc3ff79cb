#pragma once

// Admissible range [s_min, s_max] of the sum of the three largest eigenvalues
// of rho^Gamma for a fixed moment pair (p2, p3).
//
// For fixed s the three largest eigenvalues are the roots of a cubic whose
// power sums are pi1 = s, pi2 = p2 - (1-s)^2, pi3 = p3 - (1-s)^3, and
// feasibility of s means that cubic has three real roots within bounds
// (largest <= 1, smallest >= max(0, 1-s)).
//
// The endpoints s_min/s_max are located from the degeneracy structure of the
// extremes: an extremal spectrum either has two of the three top eigenvalues
// equal or sits on an active bound (x = 1, z = 0, or z = 1 - s). Each case
// reduces to a one-dimensional root find in s that bisects to machine
// precision. A plain feasibility scan cannot do this: boundary pairs of the
// region A have single-point fibres at irrational s where a 4096-point grid
// sees nothing, and the fibre cubic's discriminant is quadratically flat
// there, which caps scan/бisection accuracy near 1e-5. The scan survives as a
// fallback and as the disconnection diagnostic.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ptmom/region2d.hpp"

namespace ptmom {

struct SRange {
  double s_min{0.0}, s_max{0.0};
};

namespace detail {

constexpr double kSLo = 0.75;
constexpr double kSHi = 1.5;
constexpr double kBoundTol = 1e-10;   // root-space tolerance of feasible_s
constexpr double kCandBoundTol = 1e-9;
constexpr double kCandResidTol = 2e-9;  // |pi3 residual| accepted for a candidate

struct FibreRoots {
  bool three_real{false};
  double x{0.0}, y{0.0}, z{0.0};  // descending real parts
  double imag{0.0};               // |Im| of the complex pair when present
};

// Depressed coefficients of the top-three cubic t^3 - e1 t^2 + e2 t - e3,
// shifted by t = u + e1/3.
inline void fibre_pq(double s, const MomentPair& pr, double& p, double& q) {
  const double om = 1.0 - s;
  const double pi2 = pr.p2 - om * om;
  const double pi3 = pr.p3 - om * om * om;
  const double e1 = s;
  const double e2 = (s * s - pi2) / 2.0;
  const double e3 = (pi3 - s * pi2 + e2 * s) / 3.0;
  const double a2 = -e1, a1 = e2, a0 = -e3;
  p = a1 - a2 * a2 / 3.0;
  q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
}

inline FibreRoots fibre_roots(double s, const MomentPair& pr) {
  double p, q;
  fibre_pq(s, pr, p, q);
  const double sh = s / 3.0;

  FibreRoots out;
  const double half_q_sq = 0.25 * q * q;
  const double third_p_cu = (p / 3.0) * (p / 3.0) * (p / 3.0);
  const double delta = half_q_sq + third_p_cu;
  const double scale = half_q_sq + std::abs(third_p_cu);

  if (scale == 0.0) {
    out.three_real = true;
    out.x = out.y = out.z = sh;
    return out;
  }
  if (std::abs(delta) <= 1e-12 * scale) {
    const double simple = 3.0 * q / p + sh;
    const double dbl = -1.5 * q / p + sh;
    out.three_real = true;
    out.x = std::max(simple, dbl);
    out.z = std::min(simple, dbl);
    out.y = dbl;
    return out;
  }
  if (delta > 0.0) {
    // One real root; report the complex pair's real part and |Im|.
    const double sd = std::sqrt(delta);
    double u, v;
    if (q <= 0.0) {
      u = std::cbrt(-0.5 * q + sd);
      v = (u != 0.0) ? -p / (3.0 * u) : std::cbrt(-0.5 * q - sd);
    } else {
      v = std::cbrt(-0.5 * q - sd);
      u = (v != 0.0) ? -p / (3.0 * v) : std::cbrt(-0.5 * q + sd);
    }
    const double r = u + v;
    const double pre = -0.5 * r;
    out.three_real = false;
    out.imag = 0.5 * std::sqrt(std::max(0.0, 3.0 * r * r + 4.0 * p));
    const double a = r + sh, b = pre + sh;
    out.x = std::max(a, b);
    out.z = std::min(a, b);
    out.y = b;
    return out;
  }
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::max(-1.0, std::min(1.0, 3.0 * q / (p * m)));
  const double theta = std::acos(arg);
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double r0 = m * std::cos(theta / 3.0) + sh;
  const double r1 = m * std::cos((theta + two_pi) / 3.0) + sh;
  const double r2 = m * std::cos((theta + 2.0 * two_pi) / 3.0) + sh;
  out.three_real = true;
  out.x = std::max({r0, r1, r2});
  out.z = std::min({r0, r1, r2});
  out.y = r0 + r1 + r2 - out.x - out.z;
  return out;
}

// Continuous feasibility deficit; <= 0 on the interior of the fibre.
inline double root_margin(double s, const MomentPair& pr) {
  const FibreRoots fr = fibre_roots(s, pr);
  const double lower = std::max(0.0, 1.0 - s);
  double m = std::max(fr.x - 1.0, lower - fr.z);
  if (!fr.three_real) m = std::max(m, fr.imag);
  return m;
}

}  // namespace detail

// Fixed-s feasibility: the top-three cubic has three real roots (within the
// rounding band of its discriminant), all <= 1 and the smallest >= max(0,1-s).
inline bool feasible_s(double s, const MomentPair& pr) {
  if (s < detail::kSLo - 1e-12 || s > detail::kSHi + 1e-12) return false;
  const detail::FibreRoots fr = detail::fibre_roots(s, pr);
  if (!fr.three_real) return false;
  const double lower = std::max(0.0, 1.0 - s);
  return fr.x <= 1.0 + detail::kBoundTol && fr.z >= lower - detail::kBoundTol;
}

struct SRangeDiagnostics {
  int candidates{0};
  bool used_scan_fallback{false};
  bool disconnected{false};
};

namespace detail {

struct Candidate {
  double s;
  double top[3];  // descending top-three eigenvalues
};

inline bool validate_candidate(double s, double v0, double v1, double v2,
                               const MomentPair& pr, Candidate& out) {
  if (!(std::isfinite(s) && std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2)))
    return false;
  if (s < kSLo - kCandBoundTol || s > kSHi + kCandBoundTol) return false;
  double t[3] = {v0, v1, v2};
  std::sort(t, t + 3, std::greater<double>());
  const double lower = std::max(0.0, 1.0 - s);
  if (t[0] > 1.0 + kCandBoundTol || t[2] < lower - kCandBoundTol) return false;
  const double om = 1.0 - s;
  const double pi2 = pr.p2 - om * om;
  const double pi3 = pr.p3 - om * om * om;
  const double r2 = t[0] * t[0] + t[1] * t[1] + t[2] * t[2] - pi2;
  const double r3 = t[0] * t[0] * t[0] + t[1] * t[1] * t[1] + t[2] * t[2] * t[2] - pi3;
  if (std::abs(r2) > 1e-8 || std::abs(r3) > 1e-7) return false;
  if (std::abs(t[0] + t[1] + t[2] - s) > 1e-9) return false;
  out = Candidate{s, {t[0], t[1], t[2]}};
  return true;
}

// One extremal family: given s, produce the candidate spectrum and the pi3
// residual g(s) (pi2 is matched by construction in every family).
struct Family {
  // kind: 0 = two-equal (a,a,b) upper branch, 1 = two-equal lower branch,
  //       2 = x=1 active, 3 = z=0 active, 4 = z=1-s active
  int kind;
  const MomentPair* pr;

  bool eval(double s, double& g, double v[3]) const {
    const double om = 1.0 - s;
    const double pi2 = pr->p2 - om * om;
    const double pi3 = pr->p3 - om * om * om;
    switch (kind) {
      case 0:
      case 1: {
        const double disc = 6.0 * pi2 - 2.0 * s * s;
        if (disc < -1e-12) return false;
        const double sq = std::sqrt(std::max(0.0, disc));
        const double a = (kind == 0) ? (2.0 * s + sq) / 6.0 : (2.0 * s - sq) / 6.0;
        const double b = s - 2.0 * a;
        v[0] = a;
        v[1] = a;
        v[2] = b;
        g = 2.0 * a * a * a + b * b * b - pi3;
        return true;
      }
      case 2: {
        const double sig = s - 1.0;
        const double rem2 = pi2 - 1.0;
        const double disc = 2.0 * rem2 - sig * sig;
        if (disc < -1e-12) return false;
        const double sq = std::sqrt(std::max(0.0, disc));
        v[0] = 1.0;
        v[1] = (sig + sq) / 2.0;
        v[2] = (sig - sq) / 2.0;
        g = sig * sig * sig - 1.5 * (sig * sig - rem2) * sig - (pi3 - 1.0);
        return true;
      }
      case 3: {
        const double disc = 2.0 * pi2 - s * s;
        if (disc < -1e-12) return false;
        const double sq = std::sqrt(std::max(0.0, disc));
        v[0] = (s + sq) / 2.0;
        v[1] = (s - sq) / 2.0;
        v[2] = 0.0;
        g = s * s * s - 1.5 * (s * s - pi2) * s - pi3;
        return true;
      }
      default: {
        const double sig = 2.0 * s - 1.0;
        const double rem2 = pi2 - om * om;
        const double disc = 2.0 * rem2 - sig * sig;
        if (disc < -1e-12) return false;
        const double sq = std::sqrt(std::max(0.0, disc));
        v[0] = (sig + sq) / 2.0;
        v[1] = (sig - sq) / 2.0;
        v[2] = om;
        g = sig * sig * sig - 1.5 * (sig * sig - rem2) * sig - (pi3 - om * om * om);
        return true;
      }
    }
  }

  // s values where the family's inner square root vanishes (closed forms).
  int edge_points(double e[2]) const {
    const double p2 = pr->p2;
    switch (kind) {
      case 0:
      case 1: {
        const double d = 12.0 * p2 - 3.0;
        if (d < 0.0) return 0;
        const double sq = std::sqrt(d);
        e[0] = (3.0 - sq) / 4.0;
        e[1] = (3.0 + sq) / 4.0;
        return 2;
      }
      case 2: {
        const double d = 2.0 * (p2 - 1.0) / 3.0;
        if (d < 0.0) return 0;
        const double sq = std::sqrt(d);
        e[0] = 1.0 - sq;
        e[1] = 1.0 + sq;
        return 2;
      }
      case 3: {
        const double d = 6.0 * p2 - 2.0;
        if (d < 0.0) return 0;
        const double sq = std::sqrt(d);
        e[0] = (2.0 - sq) / 3.0;
        e[1] = (2.0 + sq) / 3.0;
        return 2;
      }
      default: {
        const double d = 4.0 * p2 - 1.0;
        if (d < 0.0) return 0;
        const double sq = std::sqrt(d);
        e[0] = (3.0 - sq) / 4.0;
        e[1] = (3.0 + sq) / 4.0;
        return 2;
      }
    }
  }
};

inline void bisect_family_zero(const Family& fam, double lo, double hi, double glo,
                               const MomentPair& pr, std::vector<Candidate>& cands) {
  double v[3];
  double g;
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!fam.eval(mid, g, v)) break;
    if ((g < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  if (fam.eval(s, g, v)) {
    Candidate c;
    if (validate_candidate(s, v[0], v[1], v[2], pr, c)) cands.push_back(c);
  }
}

// Refine a grid cell where |g| has an interior local minimum. Either the
// zero is tangential (a single touch, golden-section localizes it) or a pair
// of close crossings hides inside the cell, in which case any probe landing
// between them flips sign and both crossings are bisected exactly.
inline void refine_abs_min(const Family& fam, double lo, double hi, const MomentPair& pr,
                           std::vector<Candidate>& cands) {
  double g, v[3];
  if (!fam.eval(lo, g, v)) return;
  const double glo = g;
  double best_s = lo, best_g = std::abs(g);
  bool split = false;

  auto probe = [&](double s) {
    if (!fam.eval(s, g, v)) return std::numeric_limits<double>::infinity();
    if ((g < 0.0) != (glo < 0.0)) {
      bisect_family_zero(fam, lo, s, glo, pr, cands);
      bisect_family_zero(fam, s, hi, g, pr, cands);
      split = true;
      return 0.0;
    }
    if (std::abs(g) < best_g) {
      best_g = std::abs(g);
      best_s = s;
    }
    return std::abs(g);
  };

  constexpr double invphi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = probe(c), fd = probe(d);
  for (int it = 0; it < 90 && b - a > 1e-14 && !split; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = probe(d);
    }
  }
  if (split) return;
  if (best_g <= kCandResidTol && fam.eval(best_s, g, v)) {
    Candidate cand;
    if (validate_candidate(best_s, v[0], v[1], v[2], pr, cand)) cands.push_back(cand);
  }
}

inline void scan_family(const Family& fam, const MomentPair& pr, std::vector<Candidate>& cands) {
  constexpr int kN = 1024;
  // Scan nodes: uniform grid plus the family's domain-edge points, so a zero
  // squeezed between the last in-domain grid node and the edge is not missed.
  double nodes[kN + 4];
  int nn = 0;
  for (int i = 0; i <= kN; ++i)
    nodes[nn++] = kSLo + (kSHi - kSLo) * static_cast<double>(i) / kN;
  double e[2];
  const int ne = fam.edge_points(e);
  for (int i = 0; i < ne; ++i) {
    if (e[i] < kSLo || e[i] > kSHi) continue;
    nodes[nn++] = e[i];
    double g, v[3];
    if (fam.eval(e[i], g, v) && std::abs(g) <= kCandResidTol) {
      Candidate c;
      if (validate_candidate(e[i], v[0], v[1], v[2], pr, c)) cands.push_back(c);
    }
  }
  std::sort(nodes, nodes + nn);

  double prev_s = 0.0, prev_g = 0.0;
  bool have_prev = false;
  double pprev_g = std::numeric_limits<double>::infinity();
  double prev_prev_s = 0.0;
  for (int i = 0; i < nn; ++i) {
    const double s = nodes[i];
    double g, v[3];
    if (!fam.eval(s, g, v)) {
      have_prev = false;
      pprev_g = std::numeric_limits<double>::infinity();
      continue;
    }
    if (g == 0.0) {
      Candidate c;
      if (validate_candidate(s, v[0], v[1], v[2], pr, c)) cands.push_back(c);
    } else if (have_prev && (prev_g < 0.0) != (g < 0.0)) {
      bisect_family_zero(fam, prev_s, s, prev_g, pr, cands);
    } else if (have_prev && pprev_g != std::numeric_limits<double>::infinity()) {
      // Interior local minimum of |g|: candidate tangential zero.
      if (std::abs(prev_g) <= std::abs(pprev_g) && std::abs(prev_g) <= std::abs(g) &&
          std::abs(prev_g) < 1e-4) {
        refine_abs_min(fam, prev_prev_s, s, pr, cands);
      }
    }
    prev_prev_s = prev_s;
    pprev_g = have_prev ? prev_g : std::numeric_limits<double>::infinity();
    prev_s = s;
    prev_g = g;
    have_prev = true;
  }
}

// Closed-form fibre points for pairs on the region boundary: the spectrum is
// (c,c,c,w) on p3 = f-(p2) and (x,c,c,c) on p3 = f+(p2) with
// c = (3 +- sqrt(12 p2 - 3)) / 12.
inline void boundary_candidates(const MomentPair& pr, bool upper,
                                std::vector<Candidate>& cands) {
  const double d = std::max(0.0, 12.0 * pr.p2 - 3.0);
  const double sq = std::sqrt(d);
  for (int sign = -1; sign <= 1; sign += 2) {
    const double c = (3.0 + sign * sq) / 12.0;
    Candidate cand;
    if (upper) {
      const double x = 1.0 - 3.0 * c;
      const double s = 1.0 - c;
      if (validate_candidate(s, std::max(x, c), c, std::min(x, c), pr, cand))
        cands.push_back(cand);
    } else {
      const double s = 3.0 * c;
      if (validate_candidate(s, c, c, c, pr, cand)) cands.push_back(cand);
    }
  }
}

}  // namespace detail

// s_min/s_max over the fibre of (p2, p3); throws std::domain_error outside A
// and std::logic_error if no feasible s can be located for a member of A.
inline SRange s_range(const MomentPair& pair, SRangeDiagnostics* diag = nullptr) {
  if (!in_region_A(pair)) throw std::domain_error("s_range: (p2, p3) outside region A");

  std::vector<detail::Candidate> cands;
  cands.reserve(16);

  // Pairs on the region boundary have a single-point fibre with a closed-form
  // location; the general family scans can only localize those tangential
  // zeros to the rounding floor (~5e-9), so boundary pairs short-circuit.
  const double p2c = std::min(1.0, std::max(0.25, pair.p2));
  const auto [flo, fhi] = f_bounds(p2c);
  const double snap = 1e-9;
  if (pair.p3 <= flo + snap) detail::boundary_candidates(pair, false, cands);
  if (pair.p3 >= fhi - snap) detail::boundary_candidates(pair, true, cands);

  if (cands.empty()) {
    for (int kind = 0; kind < 5; ++kind) {
      detail::Family fam{kind, &pair};
      detail::scan_family(fam, pair, cands);
    }
  }

  bool fallback = false;
  if (cands.empty()) {
    // Spec-style uniform scan with transition bisection, then a golden-section
    // minimization of the feasibility deficit for fibres thinner than a cell.
    fallback = true;
    constexpr int kN = 4096;
    int first = -1, last = -1;
    for (int i = 0; i < kN; ++i) {
      const double s = detail::kSLo + (detail::kSHi - detail::kSLo) * i / (kN - 1.0);
      if (feasible_s(s, pair)) {
        if (first < 0) first = i;
        last = i;
      }
    }
    auto push_point = [&](double s) {
      const detail::FibreRoots fr = detail::fibre_roots(s, pair);
      detail::Candidate c;
      if (detail::validate_candidate(s, fr.x, fr.y, fr.z, pair, c)) cands.push_back(c);
    };
    if (first >= 0) {
      const double step = (detail::kSHi - detail::kSLo) / (kN - 1.0);
      double lo = detail::kSLo + first * step;
      double hi = detail::kSLo + last * step;
      // Bisect outward transitions to 1e-12.
      double a = std::max(detail::kSLo, lo - step), b = lo;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        (feasible_s(mid, pair) ? b : a) = mid;
      }
      const double smin = b;
      a = hi;
      b = std::min(detail::kSHi, hi + step);
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        (feasible_s(mid, pair) ? a : b) = mid;
      }
      push_point(smin);
      push_point(a);
      if (cands.empty()) {
        cands.push_back(detail::Candidate{smin, {0, 0, 0}});
        cands.push_back(detail::Candidate{a, {0, 0, 0}});
      }
    } else {
      // Margin minimization over the grid, then golden section. The margin is
      // discontinuous at the fibre edge (feasibility depth inside vs complex
      // residue outside), so track the best point seen rather than trusting
      // the final bracket midpoint.
      double best_s = detail::kSLo, best_m = std::numeric_limits<double>::infinity();
      auto consider = [&](double s) {
        const double m = detail::root_margin(s, pair);
        if (m < best_m) {
          best_m = m;
          best_s = s;
        }
        return m;
      };
      for (int i = 0; i < kN; ++i)
        consider(detail::kSLo + (detail::kSHi - detail::kSLo) * i / (kN - 1.0));
      const double step = (detail::kSHi - detail::kSLo) / (kN - 1.0);
      double a = std::max(detail::kSLo, best_s - step);
      double b = std::min(detail::kSHi, best_s + step);
      constexpr double invphi = 0.6180339887498948482;
      double c = b - invphi * (b - a), d = a + invphi * (b - a);
      double fc = consider(c), fd = consider(d);
      for (int it = 0; it < 90 && b - a > 1e-14; ++it) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - invphi * (b - a);
          fc = consider(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + invphi * (b - a);
          fd = consider(d);
        }
      }
      if (best_m <= 1e-7) {
        if (feasible_s(best_s, pair)) {
          // Recover the full (possibly thin) interval around the seed.
          double lo2 = std::max(detail::kSLo, best_s - step), hi2 = best_s;
          while (hi2 - lo2 > 1e-12) {
            const double mid = 0.5 * (lo2 + hi2);
            (feasible_s(mid, pair) ? hi2 : lo2) = mid;
          }
          const double smin = hi2;
          lo2 = best_s;
          hi2 = std::min(detail::kSHi, best_s + step);
          while (hi2 - lo2 > 1e-12) {
            const double mid = 0.5 * (lo2 + hi2);
            (feasible_s(mid, pair) ? lo2 : hi2) = mid;
          }
          push_point(smin);
          push_point(lo2);
          if (cands.empty()) {
            cands.push_back(detail::Candidate{smin, {0, 0, 0}});
            cands.push_back(detail::Candidate{lo2, {0, 0, 0}});
          }
        } else {
          push_point(best_s);
          if (cands.empty()) cands.push_back(detail::Candidate{best_s, {0, 0, 0}});
        }
      }
    }
  }

  if (cands.empty())
    throw std::logic_error("s_range: empty fibre for a pair inside region A");

  double smin = cands[0].s, smax = cands[0].s;
  for (const auto& c : cands) {
    smin = std::min(smin, c.s);
    smax = std::max(smax, c.s);
  }
  smin = std::min(std::max(smin, detail::kSLo), detail::kSHi);
  smax = std::min(std::max(smax, detail::kSLo), detail::kSHi);

  if (diag) {
    diag->candidates = static_cast<int>(cands.size());
    diag->used_scan_fallback = fallback;
    diag->disconnected = false;
    // The feasible set is expected to be one interval; classify midpoints
    // between distinct candidate values and flag any interior gap.
    std::vector<double> svals;
    svals.reserve(cands.size());
    for (const auto& c : cands) svals.push_back(c.s);
    std::sort(svals.begin(), svals.end());
    for (std::size_t i = 0; i + 1 < svals.size(); ++i) {
      if (svals[i + 1] - svals[i] < 1e-9) continue;
      const double mid = 0.5 * (svals[i] + svals[i + 1]);
      if (!feasible_s(mid, pair)) diag->disconnected = true;
    }
  }
  return SRange{smin, smax};
}

}  // namespace ptmom
