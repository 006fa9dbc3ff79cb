#pragma once

// Two-qubit state representation: construction, validation, partial transpose,
// the Werner and Bell-diagonal families, and Hilbert-Schmidt random sampling.
//
// Convention: computational basis ordered |00>,|01>,|10>,|11>; the partial
// transpose acts on subsystem B (the second qubit). PT-moments are identical
// for either choice, so one fixed convention is used everywhere.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ptmom/polyroots.hpp"

namespace ptmom {

using cplx = std::complex<double>;

// Dense 4x4 complex matrix, row-major value type.
class Mat4 {
 public:
  Mat4() = default;

  cplx& operator()(int i, int j) { return e_[4 * i + j]; }
  const cplx& operator()(int i, int j) const { return e_[4 * i + j]; }

  static Mat4 zero() { return Mat4{}; }
  static Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
  }

  Mat4 adjoint() const {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  cplx trace() const { return e_[0] + e_[5] + e_[10] + e_[15]; }

  friend Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 c;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (int j = 0; j < 4; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 c;
    for (int i = 0; i < 16; ++i) c.e_[i] = a.e_[i] + b.e_[i];
    return c;
  }
  friend Mat4 operator-(const Mat4& a, const Mat4& b) {
    Mat4 c;
    for (int i = 0; i < 16; ++i) c.e_[i] = a.e_[i] - b.e_[i];
    return c;
  }
  friend Mat4 operator*(double s, const Mat4& a) {
    Mat4 c;
    for (int i = 0; i < 16; ++i) c.e_[i] = s * a.e_[i];
    return c;
  }

  double max_abs_diff(const Mat4& o) const {
    double m = 0.0;
    for (int i = 0; i < 16; ++i) m = std::max(m, std::abs(e_[i] - o.e_[i]));
    return m;
  }

 private:
  std::array<cplx, 16> e_{};
};

inline double hermiticity_residual(const Mat4& m) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

namespace detail {

// Counter-based keyed stream: state_i = mix(key + i * golden). Same
// (seed, index) always yields the same matrix regardless of call order,
// which keeps parallel Monte Carlo runs replayable.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in (0,1).
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t index, std::uint64_t sub = 0) {
  SplitMix64 g(seed ^ 0x6A09E667F3BCC909ULL);
  std::uint64_t k = g.next();
  k ^= index + 0x9E3779B97F4A7C15ULL + (k << 6) + (k >> 2);
  SplitMix64 h(k);
  std::uint64_t m = h.next();
  m ^= sub + 0x2545F4914F6CDD1DULL + (m << 6) + (m >> 2);
  return SplitMix64(m).next();
}

// Box-Muller pair of standard normals.
inline void normal_pair(SplitMix64& g, double& n0, double& n1) {
  const double u = g.u01();
  const double v = g.u01();
  const double rad = std::sqrt(-2.0 * std::log(u));
  constexpr double two_pi = 6.283185307179586476925286766559;
  n0 = rad * std::cos(two_pi * v);
  n1 = rad * std::sin(two_pi * v);
}

// Newton's identities for four power sums; valid for any trace, not just 1.
inline std::array<double, 4> elementary_from_power_sums(const std::array<double, 4>& p) {
  std::array<double, 4> e{};
  e[0] = p[0];
  e[1] = (e[0] * p[0] - p[1]) / 2.0;
  e[2] = (e[1] * p[0] - e[0] * p[1] + p[2]) / 3.0;
  e[3] = (e[2] * p[0] - e[1] * p[1] + e[0] * p[2] - p[3]) / 4.0;
  return e;
}

struct SpectrumResult {
  std::array<double, 4> lambda{};  // descending
  double max_imag{0.0};            // worst imaginary residue before realification
};

// Roots of x^4 - e1 x^3 + e2 x^2 - e3 x + e4 with Newton polish, i.e. the
// eigenvalues of any Hermitian matrix with the given power sums.
//
// Multiple roots defeat plain Newton (the Ferrari noise ~eps^(1/m) leaks into
// imaginary parts, e.g. the Werner family's triple eigenvalue). A cluster of m
// nearly equal roots is therefore re-polished on the (m-1)-th derivative,
// where the multiple root is simple: f' for doubles, f'' for triples, the
// exact -c3/4 for a quadruple. Genuinely complex pairs are farther apart than
// the cluster radius and stay untouched, so infeasible moment vectors still
// surface as a large imaginary residue.
inline SpectrumResult spectrum_from_power_sums(const std::array<double, 4>& p) {
  const auto e = elementary_from_power_sums(p);
  const double c3 = -e[0], c2 = e[1], c1 = -e[2], c0 = e[3];
  auto roots = solve_quartic_monic(c3, c2, c1, c0);

  bool suspicious = false;
  for (const auto& z : roots)
    if (std::abs(z.imag()) > 1e-8) suspicious = true;
  if (suspicious) {
    constexpr double cluster_radius = 1e-4;
    int comp[4] = {0, 1, 2, 3};
    auto find = [&](int i) {
      while (comp[i] != i) i = comp[i] = comp[comp[i]];
      return i;
    };
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (std::abs(roots[i] - roots[j]) <= cluster_radius) comp[find(i)] = find(j);
    for (int rep = 0; rep < 4; ++rep) {
      int members[4], m = 0;
      for (int i = 0; i < 4; ++i)
        if (find(i) == rep) members[m++] = i;
      if (m < 2) continue;
      cplx mean{};
      for (int k = 0; k < m; ++k) mean += roots[members[k]];
      double center = (mean / static_cast<double>(m)).real();
      bool collapsed = true;
      if (m == 4) {
        center = -c3 / 4.0;
      } else if (m == 3) {
        const double disc = 36.0 * c3 * c3 - 96.0 * c2;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          const double r1 = (-6.0 * c3 + sq) / 24.0;
          const double r2 = (-6.0 * c3 - sq) / 24.0;
          center = (std::abs(r1 - center) < std::abs(r2 - center)) ? r1 : r2;
        } else {
          collapsed = false;
        }
      } else {
        const CubicRoots cr = solve_cubic(0.75 * c3, 0.5 * c2, 0.25 * c1);
        double best = cr.roots[0];
        for (int k = 1; k < cr.count; ++k)
          if (std::abs(cr.roots[k] - center) < std::abs(best - center)) best = cr.roots[k];
        center = best;
      }
      if (collapsed)
        for (int k = 0; k < m; ++k) roots[members[k]] = center;
    }
  }

  SpectrumResult out;
  for (int i = 0; i < 4; ++i) {
    out.lambda[i] = roots[i].real();
    out.max_imag = std::max(out.max_imag, std::abs(roots[i].imag()));
  }
  std::sort(out.lambda.begin(), out.lambda.end(), std::greater<double>());
  return out;
}

inline std::array<double, 4> power_traces(const Mat4& h) {
  const Mat4 h2 = h * h;
  const Mat4 h3 = h2 * h;
  const Mat4 h4 = h2 * h2;
  return {h.trace().real(), h2.trace().real(), h3.trace().real(), h4.trace().real()};
}

// Hermitian 4x4 eigenvalues through the moments -> quartic path; one code
// path shared with the moment-reconstruction pipeline.
inline std::array<double, 4> hermitian_eigenvalues(const Mat4& h) {
  return spectrum_from_power_sums(power_traces(h)).lambda;
}

}  // namespace detail

// Validated two-qubit density matrix (Hermitian, unit trace, PSD).
struct DensityMatrix {
  Mat4 m;

  // Validates all three invariants; throws std::invalid_argument naming the
  // first violated one.
  static DensityMatrix from_matrix(const Mat4& candidate) {
    const double herm = hermiticity_residual(candidate);
    if (herm > 1e-10)
      throw std::invalid_argument("DensityMatrix: not Hermitian (residual " +
                                  std::to_string(herm) + ")");
    const double tr_err = std::abs(candidate.trace() - cplx(1.0, 0.0));
    if (tr_err > 1e-10)
      throw std::invalid_argument("DensityMatrix: trace differs from 1 by " +
                                  std::to_string(tr_err));
    const auto ev = detail::hermitian_eigenvalues(candidate);
    if (ev[3] < -1e-9)
      throw std::invalid_argument("DensityMatrix: not positive semidefinite (min eigenvalue " +
                                  std::to_string(ev[3]) + ")");
    return DensityMatrix{candidate};
  }
};

// Partial transpose of a state: Hermitian, unit trace, but not necessarily
// PSD. Eigenvalues obey the two-qubit constraints (all in [-1/2, 1], at most
// one negative).
struct PartialTranspose {
  Mat4 m;
};

inline PartialTranspose partial_transpose(const DensityMatrix& rho) {
  const double herm = hermiticity_residual(rho.m);
  if (herm > 1e-10)
    throw std::invalid_argument("partial_transpose: input not Hermitian (residual " +
                                std::to_string(herm) + ")");
  if (std::abs(rho.m.trace() - cplx(1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("partial_transpose: input trace differs from 1");
  // Transpose subsystem B: (a b; c d) -> (a d; c b) on index pairs.
  PartialTranspose g;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) g.m(2 * a + d, 2 * c + b) = rho.m(2 * a + b, 2 * c + d);
  return g;
}

// rho_W(w) = w |psi-><psi-| + (1-w) I/4.
inline DensityMatrix make_werner(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("make_werner: w must be in [0,1]");
  Mat4 m;
  const double q = (1.0 - w) / 4.0;
  m(0, 0) = q;
  m(3, 3) = q;
  m(1, 1) = q + w / 2.0;
  m(2, 2) = q + w / 2.0;
  m(1, 2) = -w / 2.0;
  m(2, 1) = -w / 2.0;
  return DensityMatrix{m};
}

struct BellDiagonalParams {
  double t1{0.0}, t2{0.0}, t3{0.0};
};

// The four state-eigenvalue forms of a Bell-diagonal state; all must be >= 0.
inline std::array<double, 4> bell_constraint_values(const BellDiagonalParams& t) {
  return {1.0 - t.t1 - t.t2 - t.t3, 1.0 - t.t1 + t.t2 + t.t3, 1.0 + t.t1 - t.t2 + t.t3,
          1.0 + t.t1 + t.t2 - t.t3};
}

// rho = (I + sum_i t_i sigma_i (x) sigma_i) / 4.
inline DensityMatrix make_bell_diagonal(const BellDiagonalParams& t) {
  const auto c = bell_constraint_values(t);
  static const char* names[4] = {"1-t1-t2-t3", "1-t1+t2+t3", "1+t1-t2+t3", "1+t1+t2-t3"};
  for (int i = 0; i < 4; ++i)
    if (c[i] < -1e-12)
      throw std::domain_error(std::string("make_bell_diagonal: constraint ") + names[i] +
                              " >= 0 violated (value " + std::to_string(c[i]) + ")");
  Mat4 m;
  m(0, 0) = m(3, 3) = (1.0 + t.t3) / 4.0;
  m(1, 1) = m(2, 2) = (1.0 - t.t3) / 4.0;
  m(0, 3) = m(3, 0) = (t.t1 - t.t2) / 4.0;
  m(1, 2) = m(2, 1) = (t.t1 + t.t2) / 4.0;
  return DensityMatrix{m};
}

// Octahedron membership: separable iff |t1| + |t2| + |t3| <= 1.
inline bool is_bell_separable(const BellDiagonalParams& t) {
  return std::abs(t.t1) + std::abs(t.t2) + std::abs(t.t3) <= 1.0 + 1e-12;
}

// Hilbert-Schmidt random state: G G^dagger / tr(G G^dagger) with complex
// standard-normal G drawn from the keyed stream for (seed, index).
inline DensityMatrix sample_random_state(std::uint64_t seed, std::uint64_t index) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    detail::SplitMix64 g(detail::mix_key(seed, index, attempt));
    Mat4 ginibre;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double re, im;
        detail::normal_pair(g, re, im);
        ginibre(i, j) = cplx(re, im);
      }
    Mat4 s = ginibre * ginibre.adjoint();
    const double tr = s.trace().real();
    if (tr < 1e-12) continue;  // degenerate draw, bump the sub-counter
    s = (1.0 / tr) * s;
    // Force exact Hermitian symmetry and unit diagonal trace after rounding.
    for (int i = 0; i < 4; ++i) {
      s(i, i) = cplx(s(i, i).real(), 0.0);
      for (int j = i + 1; j < 4; ++j) {
        const cplx avg = 0.5 * (s(i, j) + std::conj(s(j, i)));
        s(i, j) = avg;
        s(j, i) = std::conj(avg);
      }
    }
    return DensityMatrix{s};
  }
  throw std::runtime_error("sample_random_state: exhausted retry budget");
}

}  // namespace ptmom
