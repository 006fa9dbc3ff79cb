#pragma once

// Brute-force ground truth over the ordered-eigenvalue simplex
//   1 >= x >= y >= z >= max(0, 1-x-y-z),  1-x-y-z >= -1/2.
// Intentionally slow and simple: a triple loop that exists to be obviously
// correct, used to validate s_range, the det extremes, and region geometry.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptmom/qstate.hpp"
#include "ptmom/region2d.hpp"
#include "ptmom/srange.hpp"

namespace ptmom {
namespace oracle {

namespace detail_o {

// Visits every grid triple and hands (x, y, z, lam4) to the functor.
template <typename Fn>
inline void for_each_simplex_point(double delta, Fn&& fn) {
  const int n = static_cast<int>(std::llround(1.0 / delta));
  for (int ix = 0; ix <= n; ++ix) {
    const double x = ix * delta;
    for (int iy = 0; iy <= ix; ++iy) {
      const double y = iy * delta;
      // z >= (1-x-y)/2 makes lam4 <= z; z <= 3/2 - x - y makes lam4 >= -1/2.
      const double rest = 1.0 - x - y;
      int iz_lo = static_cast<int>(std::ceil(std::max(0.0, rest / 2.0) / delta - 1e-9));
      int iz_hi = static_cast<int>(std::floor((rest + 0.5) / delta + 1e-9));
      iz_hi = std::min(iz_hi, iy);
      for (int iz = iz_lo; iz <= iz_hi; ++iz) {
        const double z = iz * delta;
        fn(x, y, z, 1.0 - x - y - z);
      }
    }
  }
}

}  // namespace detail_o

// Brute-force min/max of x+y+z over grid triples whose (p2, p3) match the
// target within the band.
inline SRange oracle_s_range(const MomentPair& pr, double delta, double band) {
  if (!in_region_A(pr)) throw std::domain_error("oracle_s_range: pair outside region A");
  double smin = 2.0, smax = -1.0;
  detail_o::for_each_simplex_point(delta, [&](double x, double y, double z, double w) {
    const double m2 = x * x + y * y + z * z + w * w;
    const double m3 = x * x * x + y * y * y + z * z * z + w * w * w;
    if (std::abs(m2 - pr.p2) <= band && std::abs(m3 - pr.p3) <= band) {
      const double s = x + y + z;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
  });
  if (smax < 0.0)
    throw std::runtime_error("oracle_s_range: resolution too coarse, no matching grid point");
  return SRange{smin, smax};
}

// Brute-force extremes of det = x y z (1-x-y-z) over matching grid triples.
inline std::pair<double, double> oracle_det_extremes(const MomentPair& pr, double delta,
                                                     double band) {
  if (!in_region_A(pr)) throw std::domain_error("oracle_det_extremes: pair outside region A");
  double dmin = 1.0, dmax = -1.0;
  bool hit = false;
  detail_o::for_each_simplex_point(delta, [&](double x, double y, double z, double w) {
    const double m2 = x * x + y * y + z * z + w * w;
    const double m3 = x * x * x + y * y * y + z * z * z + w * w * w;
    if (std::abs(m2 - pr.p2) <= band && std::abs(m3 - pr.p3) <= band) {
      const double det = x * y * z * w;
      dmin = std::min(dmin, det);
      dmax = std::max(dmax, det);
      hit = true;
    }
  });
  if (!hit)
    throw std::runtime_error("oracle_det_extremes: resolution too coarse, no matching grid point");
  return {dmin, dmax};
}

struct GlobalDetExtremes {
  double min{0.0}, max{0.0};
  std::array<double, 3> argmin{};  // (x, y, z) attaining the minimum
  std::array<double, 3> argmax{};
};

// Unconstrained sweep of det over the whole ordered simplex.
inline GlobalDetExtremes oracle_global_det_extremes(double delta) {
  GlobalDetExtremes out;
  out.min = 1.0;
  out.max = -1.0;
  detail_o::for_each_simplex_point(delta, [&](double x, double y, double z, double w) {
    const double det = x * y * z * w;
    if (det < out.min) {
      out.min = det;
      out.argmin = {x, y, z};
    }
    if (det > out.max) {
      out.max = det;
      out.argmax = {x, y, z};
    }
  });
  return out;
}

// Deterministic cloud of (p2, p3, p4) triples from random ordered spectra:
// a Dirichlet-style draw for the three largest eigenvalues scaled against a
// uniform smallest eigenvalue, rejected until the simplex constraints hold.
// The eigenvalue-interval constraints alone are only necessary (e.g.
// (1, 1/4, 1/4, -1/2) passes them with p2 > 1), so draws whose moment pair
// leaves region A are rejected as well.
inline std::vector<std::array<double, 3>> oracle_region_cloud(std::size_t n, std::uint64_t seed) {
  std::vector<std::array<double, 3>> cloud;
  cloud.reserve(n);
  ptmom::detail::SplitMix64 gen(ptmom::detail::mix_key(seed, 0xc1000dULL));
  while (cloud.size() < n) {
    const double lam4 = -0.5 + 1.5 * gen.u01();
    const double a = -std::log(gen.u01());
    const double b = -std::log(gen.u01());
    const double c = -std::log(gen.u01());
    const double top = a + b + c;
    if (top <= 0.0) continue;
    const double scale = (1.0 - lam4) / top;
    const double x = std::max({a, b, c}) * scale;
    const double z = std::min({a, b, c}) * scale;
    const double y = (1.0 - lam4) - x - z;
    if (!(x <= 1.0 && z >= std::max(0.0, lam4))) continue;
    const double p2 = x * x + y * y + z * z + lam4 * lam4;
    const double p3 = x * x * x + y * y * y + z * z * z + lam4 * lam4 * lam4;
    if (!in_region_A({p2, p3})) continue;
    const double p4 =
        x * x * x * x + y * y * y * y + z * z * z * z + lam4 * lam4 * lam4 * lam4;
    cloud.push_back({p2, p3, p4});
  }
  return cloud;
}

}  // namespace oracle
}  // namespace ptmom
