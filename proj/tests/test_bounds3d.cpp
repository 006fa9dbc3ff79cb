#include <catch_amalgamated.hpp>

#include <cmath>

#include "ptmom/bounds3d.hpp"
#include "ptmom/moments.hpp"

using namespace ptmom;
using Catch::Approx;

namespace {

MomentPair random_pair_in_A(ptmom::detail::SplitMix64& gen) {
  const double p2 = 0.25 + 0.75 * gen.u01();
  const auto [lo, hi] = f_bounds(p2);
  return {p2, lo + (hi - lo) * gen.u01()};
}

}  // namespace

TEST_CASE("P objective values") {
  CHECK(P_value(0.75, {0.25, 1.0 / 16}) == Approx(-1.0 / 256).margin(1e-15));
  CHECK(P_value(1.0, {0.5, 0.25}) == Approx(0.0).margin(1e-15));
  CHECK(P_value(1.5, {1.0, 0.25}) == Approx(1.0 / 16).margin(1e-15));
}

TEST_CASE("discriminant data") {
  SECTION("interior point") {
    const DeltaPQ d = delta_and_pq({0.5, 0.25});
    CHECK(d.delta == Approx(-1.0 / 110592).margin(1e-15));
    CHECK(d.p == Approx(-1.0 / 16).margin(1e-15));
    CHECK(d.q == Approx(0.0).margin(1e-18));
  }
  SECTION("degenerate corner") {
    const DeltaPQ d = delta_and_pq({0.25, 1.0 / 16});
    CHECK(d.delta == Approx(0.0).margin(1e-15));
    CHECK(d.p == Approx(0.0).margin(1e-15));
    CHECK(d.q == Approx(0.0).margin(1e-15));
  }
  SECTION("upper boundary annihilates the factorized form") {
    const double p3 = (6.0 + std::sqrt(3.0)) / 24;
    CHECK(delta_and_pq({0.5, p3}).delta == Approx(0.0).margin(1e-15));
  }
  SECTION("delta <= 0 on A and the two forms agree") {
    ptmom::detail::SplitMix64 gen(7);
    for (int it = 0; it < 500; ++it) {
      const MomentPair pr = random_pair_in_A(gen);
      const DeltaPQ d = delta_and_pq(pr);
      REQUIRE(d.delta <= 1e-15);
      const double direct = 0.25 * d.q * d.q + std::pow(d.p / 3.0, 3.0);
      REQUIRE(std::abs(direct - d.delta) <= 1e-13);
    }
  }
  SECTION("outside A is a domain error") {
    CHECK_THROWS_AS(delta_and_pq({0.5, 0.4}), std::domain_error);
  }
}

TEST_CASE("stationary roots") {
  SECTION("interior: (1/2, 1/4) gives (1, 3/4, 1/2) with theta = pi/6") {
    const StationaryRoots st = stationary_roots({0.5, 0.25});
    CHECK(st.r1 == Approx(1.0).margin(1e-12));
    CHECK(st.r2 == Approx(0.75).margin(1e-12));
    CHECK(st.r3 == Approx(0.5).margin(1e-12));
    REQUIRE(st.theta.has_value());
    CHECK(*st.theta == Approx(std::acos(0.0) / 3.0).margin(1e-12));
  }
  SECTION("corner: triple root 3/4, theta absent") {
    const StationaryRoots st = stationary_roots({0.25, 1.0 / 16});
    CHECK(st.r1 == Approx(0.75).margin(1e-12));
    CHECK(st.r3 == Approx(0.75).margin(1e-12));
    CHECK_FALSE(st.theta.has_value());
  }
  SECTION("upper boundary: double root L+") {
    const double s3 = std::sqrt(3.0);
    const StationaryRoots st = stationary_roots({0.5, (6.0 + s3) / 24});
    CHECK(st.r1 == Approx((9.0 + s3) / 12).margin(1e-9));
    CHECK(st.r2 == Approx((9.0 + s3) / 12).margin(1e-9));
    CHECK(st.r3 == Approx((9.0 - 2.0 * s3) / 12).margin(1e-9));
  }
  SECTION("lower boundary: double root ell-") {
    const double s3 = std::sqrt(3.0);
    const StationaryRoots st = stationary_roots({0.5, (6.0 - s3) / 24});
    CHECK(st.r1 == Approx((9.0 + 2.0 * s3) / 12).margin(1e-9));
    CHECK(st.r2 == Approx((9.0 - s3) / 12).margin(1e-9));
    CHECK(st.r3 == Approx((9.0 - s3) / 12).margin(1e-9));
  }
  SECTION("ranges and derivative residuals on random pairs") {
    ptmom::detail::SplitMix64 gen(88);
    for (int it = 0; it < 500; ++it) {
      const MomentPair pr = random_pair_in_A(gen);
      const StationaryRoots st = stationary_roots(pr);
      REQUIRE(st.r1 >= st.r2);
      REQUIRE(st.r2 >= st.r3);
      REQUIRE(st.r3 >= 0.25 - 1e-9);
      REQUIRE(st.r3 <= 0.75 + 1e-9);
      REQUIRE(st.r1 >= 0.75 - 1e-9);
      REQUIRE(st.r1 <= 1.25 + 1e-9);
      REQUIRE(st.r2 >= 0.5 - 1e-9);
      REQUIRE(st.r2 <= 1.0 + 1e-9);
      for (double r : {st.r1, st.r2, st.r3}) {
        const double dP = ((4.0 * r - 9.0) * r + (7.0 - pr.p2)) * r +
                          (3.0 * pr.p2 + 2.0 * pr.p3 - 11.0) / 6.0;
        REQUIRE(std::abs(dP) <= 1e-8);
      }
      if (st.theta) {
        REQUIRE(*st.theta >= -1e-12);
        REQUIRE(*st.theta <= std::acos(-1.0) / 3.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("p4 bounds reproduce the analytic reference points") {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  struct Row {
    double p2, p3, smin, smax, m, M, Fm, Fp;
  };
  const Row rows[] = {
      {0.25, 1.0 / 16, 0.75, 0.75, 1.0 / 256, 1.0 / 256, 1.0 / 64, 1.0 / 64},
      {1.0 / 3, 5.0 / 36, 5.0 / 6, 5.0 / 6, 1.0 / 432, 1.0 / 432, 7.0 / 108, 7.0 / 108},
      {1.0 / 3, 1.0 / 9, 1.0, 1.0, 0.0, 0.0, 1.0 / 27, 1.0 / 27},
      {0.5, (6.0 + s3) / 24, (9.0 + s3) / 12, (9.0 + s3) / 12, (2 * s3 - 3) / 576,
       (2 * s3 - 3) / 576, (7 + 2 * s3) / 48, (7 + 2 * s3) / 48},
      {0.5, 0.25, 1.0, (3.0 + s2) / 4, -1.0 / 256, 0.0, 1.0 / 8, 9.0 / 64},
      {0.5, (6.0 - s3) / 24, (3.0 + s3) / 4, (3.0 + s3) / 4, -(2 * s3 + 3) / 576,
       -(2 * s3 + 3) / 576, (7 - 2 * s3) / 48, (7 - 2 * s3) / 48},
      {1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0},
      {1.0, 0.25, 1.5, 1.5, -1.0 / 16, -1.0 / 16, 0.25, 0.25},
  };
  for (const Row& r : rows) {
    CAPTURE(r.p2, r.p3);
    const BoundsResult b = p4_bounds({r.p2, r.p3});
    CHECK(b.srange.s_min == Approx(r.smin).margin(1e-9));
    CHECK(b.srange.s_max == Approx(r.smax).margin(1e-9));
    CHECK(b.m == Approx(r.m).margin(1e-9));
    CHECK(b.M == Approx(r.M).margin(1e-9));
    CHECK(b.F_minus == Approx(r.Fm).margin(1e-9));
    CHECK(b.F_plus == Approx(r.Fp).margin(1e-9));
    // Witnesses evaluate back to the bounds.
    CHECK(b.F_mid + 4.0 * P_value(b.s_at_min, {r.p2, r.p3}) == Approx(b.F_minus).margin(1e-12));
    CHECK(b.F_mid + 4.0 * P_value(b.s_at_max, {r.p2, r.p3}) == Approx(b.F_plus).margin(1e-12));
  }
}

TEST_CASE("dividing surface and envelope") {
  CHECK(dividing_surface({1.0 / 3, 1.0 / 9}) == Approx(1.0 / 27).margin(1e-15));
  CHECK(dividing_surface({1.0, 0.25}) == Approx(0.0).margin(1e-15));
  CHECK(dividing_surface({0.25, 1.0 / 16}) == Approx(1.0 / 32).margin(1e-15));

  const auto e1 = envelope({0.5, 0.25});
  CHECK(e1.first == Approx(7.0 / 64).margin(1e-15));
  CHECK(e1.second == Approx(3.0 / 8).margin(1e-15));
  // Saturation cases: F+ = S+ at the maximally entangled point, F- = S- at
  // the maximally mixed point.
  const auto e2 = envelope({1.0, 0.25});
  CHECK(e2.second == Approx(p4_bounds({1.0, 0.25}).F_plus).margin(1e-12));
  const auto e3 = envelope({0.25, 1.0 / 16});
  CHECK(e3.first == Approx(p4_bounds({0.25, 1.0 / 16}).F_minus).margin(1e-12));
}

TEST_CASE("bound consistency invariants") {
  ptmom::detail::SplitMix64 gen(31337);
  for (int it = 0; it < 400; ++it) {
    const MomentPair pr = random_pair_in_A(gen);
    const BoundsResult b = p4_bounds(pr);
    REQUIRE(b.m <= b.M + 1e-12);
    REQUIRE(b.m >= -1.0 / 16 - 1e-9);
    REQUIRE(b.M <= 1.0 / 256 + 1e-9);
    REQUIRE(b.F_minus <= b.F_plus + 1e-12);
    REQUIRE(b.F_plus - b.F_minus <= 17.0 / 64 + 1e-9);
    const auto [slo, shi] = envelope(pr);
    REQUIRE(slo - 1e-9 <= b.F_minus);
    REQUIRE(b.F_plus <= shi + 1e-9);
  }
}

TEST_CASE("candidate extremes match a refined grid scan of P") {
  ptmom::detail::SplitMix64 gen(2718);
  for (int it = 0; it < 25; ++it) {
    const MomentPair pr = random_pair_in_A(gen);
    const BoundsResult b = p4_bounds(pr);
    const int n = 10000;
    double lo = 1e300, hi = -1e300, slo = 0.0, shi = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double s = b.srange.s_min + (b.srange.s_max - b.srange.s_min) * i / double(n);
      const double v = P_value(s, pr);
      if (v < lo) { lo = v; slo = s; }
      if (v > hi) { hi = v; shi = s; }
    }
    // Golden-section polish of the grid winners keeps the oracle independent
    // of the candidate formulas while removing grid quantization.
    auto polish = [&](double s0, int sign) {
      const double h = (b.srange.s_max - b.srange.s_min) / n;
      double a = std::max(b.srange.s_min, s0 - h), c = std::min(b.srange.s_max, s0 + h);
      constexpr double invphi = 0.6180339887498948482;
      double x1 = c - invphi * (c - a), x2 = a + invphi * (c - a);
      double f1 = sign * P_value(x1, pr), f2 = sign * P_value(x2, pr);
      for (int k = 0; k < 80; ++k) {
        if (f1 < f2) { c = x2; x2 = x1; f2 = f1; x1 = c - invphi * (c - a); f1 = sign * P_value(x1, pr); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + invphi * (c - a); f2 = sign * P_value(x2, pr); }
      }
      return P_value(0.5 * (a + c), pr);
    };
    const double minP = (b.F_minus - b.F_mid) / 4.0;
    const double maxP = (b.F_plus - b.F_mid) / 4.0;
    REQUIRE(std::abs(polish(slo, +1) - minP) <= 1e-9);
    REQUIRE(std::abs(polish(shi, -1) - maxP) <= 1e-9);
  }
}

TEST_CASE("Werner curve: single-point fibres along the lower boundary") {
  // Every Werner pair sits on p3 = f-(p2), so F- = F+ = p4(w) must pinch.
  for (int i = 0; i <= 400; ++i) {
    const double w = i / 400.0;
    const PTMomentVector p = werner_moments(w);
    CAPTURE(w);
    const BoundsResult b = p4_bounds({p.p2, p.p3});
    REQUIRE(std::abs(b.srange.s_max - b.srange.s_min) <= 1e-9);
    REQUIRE(p.p4 >= b.F_minus - 1e-9);
    REQUIRE(p.p4 <= b.F_plus + 1e-9);
    const TripleClass cls = classify_triple(p.p2, p.p3, p.p4);
    if (w < 1.0 / 3 - 1e-6) REQUIRE(cls == TripleClass::Separable);
    if (w > 1.0 / 3 + 1e-6) REQUIRE(cls == TripleClass::Entangled);
  }
}

TEST_CASE("Bell-diagonal sweep: bounds hold and classification matches the octahedron") {
  // Dense tetrahedron grid; the PT spectra here are frequently degenerate,
  // which exercises the double/triple-root paths end to end.
  const int n = 12;
  int checked = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        const BellDiagonalParams t{-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n};
        const auto c = bell_constraint_values(t);
        if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[3] < 0) continue;
        const PTMomentVector p = bell_diagonal_moments(t);
        CAPTURE(t.t1, t.t2, t.t3);
        REQUIRE(in_region_A({p.p2, p.p3}));
        const BoundsResult b = p4_bounds({p.p2, p.p3});
        REQUIRE(p.p4 >= b.F_minus - 1e-8);
        REQUIRE(p.p4 <= b.F_plus + 1e-8);
        const double octa = std::abs(t.t1) + std::abs(t.t2) + std::abs(t.t3);
        if (std::abs(octa - 1.0) > 1e-9) {
          const TripleClass cls = classify_with_bounds(b, p.p4);
          REQUIRE((cls == TripleClass::Separable) == (octa < 1.0));
        }
        ++checked;
      }
  REQUIRE(checked > 400);
}

TEST_CASE("triple classification") {
  SECTION("worked examples") {
    CHECK(classify_triple(1.0 / 3, 1.0 / 9, 1.0 / 27) == TripleClass::Separable);
    CHECK(classify_triple(1.0, 0.25, 0.25) == TripleClass::Entangled);
    CHECK(classify_triple(0.5, 0.25, 0.2) == TripleClass::Infeasible);
    CHECK(classify_triple(1.2, 0.5, 0.3) == TripleClass::Infeasible);
  }
  SECTION("boundary p4 = F classifies Separable; the band is configurable") {
    const double F = dividing_surface({0.5, 0.25});
    CHECK(classify_triple(0.5, 0.25, F) == TripleClass::Separable);
    CHECK(classify_triple(0.5, 0.25, F + 1e-6) == TripleClass::Entangled);
    CHECK(classify_triple(0.5, 0.25, F + 1e-6, 1e-3) == TripleClass::Separable);
  }
  SECTION("2D certificate implies 3D entangled on sampled states") {
    for (std::uint64_t i = 0; i < 1500; ++i) {
      const PTMomentVector p = pt_moments(partial_transpose(sample_random_state(404, i)));
      if (classify_2d({p.p2, p.p3}) == Classification2D::CertifiedEntangled)
        REQUIRE(classify_triple(p.p2, p.p3, p.p4) == TripleClass::Entangled);
    }
  }
}
