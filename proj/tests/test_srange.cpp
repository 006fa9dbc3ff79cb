#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ptmom/bounds3d.hpp"
#include "ptmom/moments.hpp"
#include "ptmom/oracle.hpp"
#include "ptmom/srange.hpp"

using namespace ptmom;
using Catch::Approx;

namespace {

MomentPair random_interior_pair(ptmom::detail::SplitMix64& gen) {
  // Sample via a random state so pairs follow the physically reachable set.
  const PTMomentVector p =
      pt_moments(partial_transpose(sample_random_state(gen.next(), gen.next())));
  return {p.p2, p.p3};
}

}  // namespace

TEST_CASE("feasible_s worked examples") {
  CHECK(feasible_s(0.75, {0.25, 1.0 / 16}));
  CHECK_FALSE(feasible_s(0.9, {0.5, 0.25}));
  CHECK_FALSE(feasible_s(1.2, {0.5, 0.25}));
  CHECK(feasible_s(1.05, {0.5, 0.25}));
  CHECK_FALSE(feasible_s(0.6, {0.5, 0.25}));   // below 3/4
  CHECK_FALSE(feasible_s(1.6, {0.5, 0.25}));   // above 3/2
}

TEST_CASE("s_range reproduces the analytic reference points") {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  struct Row {
    double p2, p3, lo, hi;
  };
  const Row rows[] = {
      {0.25, 1.0 / 16, 0.75, 0.75},
      {1.0 / 3, 5.0 / 36, 5.0 / 6, 5.0 / 6},
      {1.0 / 3, 1.0 / 9, 1.0, 1.0},
      {0.5, (6.0 + s3) / 24, (9.0 + s3) / 12, (9.0 + s3) / 12},
      {0.5, 0.25, 1.0, (3.0 + s2) / 4},
      {0.5, (6.0 - s3) / 24, (3.0 + s3) / 4, (3.0 + s3) / 4},
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 0.25, 1.5, 1.5},
  };
  for (const Row& r : rows) {
    CAPTURE(r.p2, r.p3);
    const SRange sr = s_range({r.p2, r.p3});
    CHECK(sr.s_min == Approx(r.lo).margin(1e-9));
    CHECK(sr.s_max == Approx(r.hi).margin(1e-9));
  }
}

TEST_CASE("s_range basics and errors") {
  CHECK_THROWS_AS(s_range({0.2, 0.05}), std::domain_error);
  CHECK_THROWS_AS(s_range({0.5, 0.4}), std::domain_error);

  ptmom::detail::SplitMix64 gen(2024);
  for (int it = 0; it < 300; ++it) {
    const MomentPair pr = random_interior_pair(gen);
    SRangeDiagnostics diag;
    const SRange sr = s_range(pr, &diag);
    REQUIRE(sr.s_min >= 0.75 - 1e-9);
    REQUIRE(sr.s_max <= 1.5 + 1e-9);
    REQUIRE(sr.s_min <= sr.s_max + 1e-12);
    REQUIRE_FALSE(diag.disconnected);
    // Interior points of the reported interval are feasible.
    if (sr.s_max - sr.s_min > 1e-6) {
      const double mid = 0.5 * (sr.s_min + sr.s_max);
      REQUIRE(feasible_s(mid, pr));
    }
  }
}

TEST_CASE("extremal s has a degenerate or bound-active spectrum") {
  ptmom::detail::SplitMix64 gen(515);
  for (int it = 0; it < 100; ++it) {
    const MomentPair pr = random_interior_pair(gen);
    const SRange sr = s_range(pr);
    for (double s : {sr.s_min, sr.s_max}) {
      const auto fr = ptmom::detail::fibre_roots(s, pr);
      const double lower = std::max(0.0, 1.0 - s);
      const bool two_equal = std::min(fr.x - fr.y, fr.y - fr.z) <= 1e-6;
      const bool bound_active = fr.x >= 1.0 - 1e-6 || fr.z <= lower + 1e-6 ||
                                s >= 1.5 - 1e-9 || s <= 0.75 + 1e-9;
      REQUIRE((two_equal || bound_active));
    }
  }
}

TEST_CASE("bounds stay sane at controlled distances from the boundary") {
  // Sweep a distance ladder against both boundary curves plus the interior
  // special curves; exercises the snapped, family, and fallback paths.
  const double dists[] = {1e-13, 1e-12, 1e-11, 1e-10, 1e-9, 2e-9, 5e-9,
                          1e-8,  5e-8,  1e-7,  1e-6,  1e-5, 1e-4, 1e-3};
  for (int ip = 0; ip <= 40; ++ip) {
    const double p2 = 0.2501 + (0.9999 - 0.2501) * ip / 40.0;
    const auto [flo, fhi] = f_bounds(p2);
    std::vector<double> p3s;
    for (double d : dists) {
      p3s.push_back(flo + d);
      p3s.push_back(fhi - d);
    }
    for (double c : {(6 * p2 - 1) / 8, (3 * p2 - 1) / 2, p2 * p2, 0.5 * (flo + fhi)})
      p3s.push_back(c);
    for (double p3 : p3s) {
      if (p3 < flo || p3 > fhi) continue;
      const MomentPair pr{p2, p3};
      if (!in_region_A(pr)) continue;
      CAPTURE(p2, p3);
      const BoundsResult b = p4_bounds(pr);
      REQUIRE(b.srange.s_min >= 0.75 - 1e-9);
      REQUIRE(b.srange.s_max <= 1.5 + 1e-9);
      REQUIRE(b.srange.s_min <= b.srange.s_max + 1e-12);
      REQUIRE(b.F_minus <= b.F_plus + 1e-12);
      REQUIRE(b.m >= -1.0 / 16 - 1e-9);
      REQUIRE(b.M <= 1.0 / 256 + 1e-9);
      REQUIRE(b.F_plus - b.F_minus <= 17.0 / 64 + 1e-9);
      const auto [slo, shi] = envelope(pr);
      REQUIRE(slo - 1e-9 <= b.F_minus);
      REQUIRE(b.F_plus <= shi + 1e-9);
    }
  }
}

TEST_CASE("s_range agrees with the brute-force oracle") {
  ptmom::detail::SplitMix64 gen(99177);
  const double delta = 4e-3;
  int done = 0, two_sided = 0;
  while (done < 200) {
    const MomentPair pr = random_interior_pair(gen);
    const SRange sr = s_range(pr);
    SRange osr{};
    try {
      osr = oracle::oracle_s_range(pr, delta, 3.0 * delta);
    } catch (const std::runtime_error&) {
      continue;  // fibre thinner than the oracle grid
    }
    CAPTURE(pr.p2, pr.p3, sr.s_min, sr.s_max, osr.s_min, osr.s_max);
    // Band matching sees neighboring fibres, so at the default band the
    // oracle brackets the analytic interval from outside...
    REQUIRE(osr.s_min <= sr.s_min + 10.0 * delta);
    REQUIRE(osr.s_max >= sr.s_max - 10.0 * delta);
    // ...and matches it two-sidedly up to the band smearing. The smearing is
    // measured directly as the shift between the coarse- and tight-band runs;
    // where the endpoints are well conditioned it vanishes and the comparison
    // is the plain 10-delta one.
    try {
      const SRange tight = oracle::oracle_s_range(pr, delta, delta / 3.0);
      const double smear_lo = 1.5 * std::abs(osr.s_min - tight.s_min);
      const double smear_hi = 1.5 * std::abs(osr.s_max - tight.s_max);
      REQUIRE(std::abs(tight.s_min - sr.s_min) <= 10.0 * delta + smear_lo);
      REQUIRE(std::abs(tight.s_max - sr.s_max) <= 10.0 * delta + smear_hi);
      ++two_sided;
    } catch (const std::runtime_error&) {
      // no grid triple inside the tight band; the bracketing check above
      // still covered this pair
    }
    ++done;
  }
  REQUIRE(two_sided >= 50);
}
