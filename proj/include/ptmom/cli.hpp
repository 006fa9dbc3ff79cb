#pragma once

// Command-line front end. Subcommands: classify, bounds, surface, family,
// verify, reconstruct. Exit-code contract (frozen for scripting):
//   0 ok / classified, 1 verification failure, 2 infeasible input,
//   3 usage or parse error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptmom/io.hpp"
#include "ptmom/oracle.hpp"
#include "ptmom/ptmom.hpp"

namespace ptmom {
namespace cli {

using nlohmann::json;

inline const char* class_name(TripleClass c) {
  switch (c) {
    case TripleClass::Separable: return "Separable";
    case TripleClass::Entangled: return "Entangled";
    default: return "Infeasible";
  }
}

inline const char* class2d_name(Classification2D c) {
  switch (c) {
    case Classification2D::CertifiedEntangled: return "CertifiedEntangled";
    case Classification2D::Inconclusive: return "Inconclusive";
    default: return "Infeasible";
  }
}

inline double default_eps() {
  if (const char* env = std::getenv("PTMOM_EPS")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 0.0) return v;
  }
  return kDefaultClassifyBand;
}

namespace detail_cli {

struct MomentInput {
  std::string state_path;
  std::optional<double> p2, p3, p4;
};

// Moments either from a state file or from explicit flags.
inline PTMomentVector resolve_moments(const MomentInput& in, bool need_p4) {
  if (!in.state_path.empty()) {
    const DensityMatrix rho = load_state(in.state_path);
    return pt_moments(partial_transpose(rho));
  }
  if (!in.p2 || !in.p3 || (need_p4 && !in.p4))
    throw std::invalid_argument(need_p4 ? "provide --state or all of --p2 --p3 --p4"
                                        : "provide --state or both --p2 --p3");
  return {1.0, *in.p2, *in.p3, in.p4.value_or(0.0)};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

struct MeshRow {
  double p2, p3, f_minus_2d, f_plus_2d, phi4v, s_min, s_max, delta, F_minus, F_mid, F_plus;
};

inline MeshRow mesh_row(double p2v, double p3v) {
  const MomentPair pr{p2v, p3v};
  const double p2c = std::min(1.0, std::max(0.25, p2v));
  const auto [flo, fhi] = f_bounds(p2c);
  const BoundsResult b = p4_bounds(pr);
  const DeltaPQ d = delta_and_pq(pr);
  return {p2v,  p3v,  flo, fhi, phi4(p2c), b.srange.s_min, b.srange.s_max,
          d.delta, b.F_minus, b.F_mid, b.F_plus};
}

inline constexpr const char* kMeshHeader =
    "p2,p3,f_minus_2d,f_plus_2d,phi4,s_min,s_max,delta,F_minus,F_mid,F_plus";

inline std::string mesh_csv_row(const MeshRow& r) {
  return fmt17(r.p2) + "," + fmt17(r.p3) + "," + fmt17(r.f_minus_2d) + "," + fmt17(r.f_plus_2d) +
         "," + fmt17(r.phi4v) + "," + fmt17(r.s_min) + "," + fmt17(r.s_max) + "," + fmt17(r.delta) +
         "," + fmt17(r.F_minus) + "," + fmt17(r.F_mid) + "," + fmt17(r.F_plus);
}

inline json mesh_json_row(const MeshRow& r) {
  return json{{"p2", r.p2},         {"p3", r.p3},          {"f_minus_2d", r.f_minus_2d},
              {"f_plus_2d", r.f_plus_2d}, {"phi4", r.phi4v}, {"s_min", r.s_min},
              {"s_max", r.s_max},   {"delta", r.delta},    {"F_minus", r.F_minus},
              {"F_mid", r.F_mid},   {"F_plus", r.F_plus}};
}

}  // namespace detail_cli

// classify: state or explicit (p2, p3, p4) -> classification report.
inline int cmd_classify(const detail_cli::MomentInput& in, double eps, std::ostream& out) {
  const PTMomentVector p = detail_cli::resolve_moments(in, true);
  const MomentPair pr{p.p2, p.p3};

  json rep;
  rep["p"] = {p.p1, p.p2, p.p3, p.p4};
  rep["eps"] = eps;

  if (!in_region_A(pr)) {
    rep["classification"] = "Infeasible";
    rep["reason"] = "(p2, p3) outside region A";
    out << rep.dump(2) << "\n";
    return 2;
  }
  const BoundsResult b = p4_bounds(pr);
  const TripleClass cls = classify_with_bounds(b, p.p4, eps);
  rep["classification"] = class_name(cls);
  rep["F_minus"] = b.F_minus;
  rep["F_mid"] = b.F_mid;
  rep["F_plus"] = b.F_plus;
  rep["s_min"] = b.srange.s_min;
  rep["s_max"] = b.srange.s_max;
  if (cls == TripleClass::Infeasible) {
    rep["negativity"] = nullptr;
    rep["concurrence_interval"] = nullptr;
    out << rep.dump(2) << "\n";
    return 2;
  }
  const Spectrum spec = reconstruct_spectrum(p);
  const double neg = negativity(spec);
  const auto ci = concurrence_interval(std::min(1.0, neg));
  rep["negativity"] = neg;
  rep["concurrence_interval"] = {ci.first, ci.second};
  out << rep.dump(2) << "\n";
  return 0;
}

// bounds: classify without p4 — F-/F/F+ and the s-range for (p2, p3).
inline int cmd_bounds(const detail_cli::MomentInput& in, std::ostream& out) {
  const PTMomentVector p = detail_cli::resolve_moments(in, false);
  const MomentPair pr{p.p2, p.p3};
  json rep;
  rep["p2"] = p.p2;
  rep["p3"] = p.p3;
  if (!in_region_A(pr)) {
    rep["in_region"] = false;
    out << rep.dump(2) << "\n";
    return 2;
  }
  const BoundsResult b = p4_bounds(pr);
  const auto [slo, shi] = envelope(pr);
  rep["in_region"] = true;
  rep["F_minus"] = b.F_minus;
  rep["F_mid"] = b.F_mid;
  rep["F_plus"] = b.F_plus;
  rep["S_minus"] = slo;
  rep["S_plus"] = shi;
  rep["m"] = b.m;
  rep["M"] = b.M;
  rep["s_min"] = b.srange.s_min;
  rep["s_max"] = b.srange.s_max;
  rep["s_at_min"] = b.s_at_min;
  rep["s_at_max"] = b.s_at_max;
  out << rep.dump(2) << "\n";
  return 0;
}

// surface: N x N parameterization of A. p2 uniform on [1/4, 1]; per column p3
// uniform on [f-(p2), f+(p2)]; the degenerate column at p2 = 1/4 emits one row.
inline int cmd_surface(int n, const std::string& output, const std::string& format,
                       std::ostream&) {
  if (n < 2) throw std::invalid_argument("surface: --n must be >= 2");
  std::string csv = std::string(detail_cli::kMeshHeader) + "\n";
  json arr = json::array();
  const bool want_json = format == "json";
  for (int j = 0; j < n; ++j) {
    const double p2v = 0.25 + 0.75 * static_cast<double>(j) / (n - 1);
    const auto [flo, fhi] = f_bounds(p2v);
    const int rows = (fhi - flo <= 1e-12) ? 1 : n;
    for (int k = 0; k < rows; ++k) {
      const double p3v = (rows == 1) ? flo : flo + (fhi - flo) * static_cast<double>(k) / (n - 1);
      const detail_cli::MeshRow r = detail_cli::mesh_row(p2v, p3v);
      if (want_json)
        arr.push_back(detail_cli::mesh_json_row(r));
      else
        csv += detail_cli::mesh_csv_row(r) + "\n";
    }
  }
  detail_cli::write_file(output, want_json ? arr.dump(2) + "\n" : csv);
  return 0;
}

// family: Werner curve or Bell-diagonal cloud/point.
inline int cmd_family(const std::string& family, int samples, const std::string& t_arg,
                      std::uint64_t seed, const std::string& output, const std::string& format,
                      std::ostream&) {
  const bool want_json = format == "json";
  json arr = json::array();
  std::string csv;

  auto classify_str = [](const PTMomentVector& p) {
    return class_name(classify_triple(p.p2, p.p3, p.p4));
  };

  if (family == "werner") {
    if (samples < 1) throw std::invalid_argument("family werner: --samples must be >= 1");
    csv = "w,p2,p3,p4,classification\n";
    for (int i = 0; i < samples; ++i) {
      const double w = (samples == 1) ? 0.0 : static_cast<double>(i) / (samples - 1);
      const PTMomentVector p = werner_moments(w);
      const char* cls = classify_str(p);
      if (want_json)
        arr.push_back(json{{"w", w}, {"p2", p.p2}, {"p3", p.p3}, {"p4", p.p4},
                           {"classification", cls}});
      else
        csv += fmt17(w) + "," + fmt17(p.p2) + "," + fmt17(p.p3) + "," + fmt17(p.p4) + "," + cls +
               "\n";
    }
  } else if (family == "bell") {
    csv = "t1,t2,t3,p2,p3,p4,classification\n";
    std::vector<BellDiagonalParams> params;
    if (!t_arg.empty()) {
      BellDiagonalParams t;
      if (std::sscanf(t_arg.c_str(), "%lf,%lf,%lf", &t.t1, &t.t2, &t.t3) != 3)
        throw std::invalid_argument("family bell: --t expects 't1,t2,t3'");
      const auto c = bell_constraint_values(t);
      static const char* names[4] = {"1-t1-t2-t3", "1-t1+t2+t3", "1+t1-t2+t3", "1+t1+t2-t3"};
      for (int i = 0; i < 4; ++i)
        if (c[i] < -1e-12)
          throw std::invalid_argument(std::string("family bell: constraint ") + names[i] +
                                      " >= 0 violated");
      params.push_back(t);
    } else {
      if (samples < 1) throw std::invalid_argument("family bell: --samples must be >= 1");
      detail::SplitMix64 gen(detail::mix_key(seed, 0xbe11ULL));
      while (static_cast<int>(params.size()) < samples) {
        BellDiagonalParams t{2.0 * gen.u01() - 1.0, 2.0 * gen.u01() - 1.0, 2.0 * gen.u01() - 1.0};
        const auto c = bell_constraint_values(t);
        if (c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[3] >= 0) params.push_back(t);
      }
    }
    for (const auto& t : params) {
      const PTMomentVector p = bell_diagonal_moments(t);
      const char* cls = classify_str(p);
      if (want_json)
        arr.push_back(json{{"t1", t.t1}, {"t2", t.t2}, {"t3", t.t3}, {"p2", p.p2}, {"p3", p.p3},
                           {"p4", p.p4}, {"classification", cls}});
      else
        csv += fmt17(t.t1) + "," + fmt17(t.t2) + "," + fmt17(t.t3) + "," + fmt17(p.p2) + "," +
               fmt17(p.p3) + "," + fmt17(p.p4) + "," + cls + "\n";
    }
  } else {
    throw std::invalid_argument("family: --family must be 'werner' or 'bell'");
  }
  detail_cli::write_file(output, want_json ? arr.dump(2) + "\n" : csv);
  return 0;
}

// verify: Monte Carlo membership, PPT agreement, and oracle spot checks.
inline int cmd_verify(int n, std::uint64_t seed, double delta, int oracle_subsample,
                      std::ostream& out) {
  if (n < 1) throw std::invalid_argument("verify: --n must be >= 1");
  int viol_region = 0, viol_p4 = 0, viol_cls = 0, viol_oracle = 0, excluded = 0;
  double worst_lo = 1e300, worst_hi = 1e300, worst_oracle = 0.0;
  json first_violation;

  for (int i = 0; i < n; ++i) {
    const DensityMatrix rho = sample_random_state(seed, i);
    const PartialTranspose g = partial_transpose(rho);
    const PTMomentVector p = pt_moments(g);
    const MomentPair pr{p.p2, p.p3};

    auto record = [&](const char* kind) {
      if (first_violation.is_null())
        first_violation = json{{"index", i}, {"kind", kind}, {"state", state_to_json(rho)},
                               {"p", {p.p1, p.p2, p.p3, p.p4}}};
    };

    if (!in_region_A(pr)) {
      ++viol_region;
      record("region");
      continue;
    }
    const BoundsResult b = p4_bounds(pr);
    const double mlo = p.p4 - b.F_minus, mhi = b.F_plus - p.p4;
    worst_lo = std::min(worst_lo, mlo);
    worst_hi = std::min(worst_hi, mhi);
    if (mlo < -kFeasibilitySlack || mhi < -kFeasibilitySlack) {
      ++viol_p4;
      record("p4_bounds");
    }
    const auto ev = detail::hermitian_eigenvalues(g.m);
    if (std::abs(ev[3]) <= 1e-8) {
      ++excluded;
    } else {
      const TripleClass cls = classify_with_bounds(b, p.p4);
      if ((cls == TripleClass::Entangled) != (ev[3] < 0.0) || cls == TripleClass::Infeasible) {
        ++viol_cls;
        record("classification");
      }
    }
    if (i < oracle_subsample) {
      // The band-matched oracle can only over-cover (it sees neighboring
      // fibres too), so it must bracket the analytic range from outside.
      try {
        const SRange osr = oracle::oracle_s_range(pr, delta, 3.0 * delta);
        const auto ode = oracle::oracle_det_extremes(pr, delta, 3.0 * delta);
        const double dev = std::max({osr.s_min - b.srange.s_min, b.srange.s_max - osr.s_max,
                                     ode.first - b.m, b.M - ode.second});
        worst_oracle = std::max(worst_oracle, dev);
        if (dev > 10.0 * delta) {
          ++viol_oracle;
          record("oracle");
        }
      } catch (const std::runtime_error&) {
        ++viol_oracle;
        record("oracle_resolution");
      }
    }
  }

  const int violations = viol_region + viol_p4 + viol_cls + viol_oracle;
  json rep;
  rep["samples"] = n;
  rep["seed"] = seed;
  rep["violations"] = json{{"region", viol_region},
                           {"p4_bounds", viol_p4},
                           {"classification", viol_cls},
                           {"oracle", viol_oracle}};
  rep["excluded_boundary_band"] = excluded;
  rep["worst_margins"] = json{{"p4_minus_F_minus", worst_lo}, {"F_plus_minus_p4", worst_hi}};
  rep["oracle"] = json{{"subsample", oracle_subsample}, {"delta", delta},
                       {"worst_deviation", worst_oracle}};
  if (!first_violation.is_null()) rep["first_violation"] = first_violation;
  out << rep.dump(2) << "\n";
  return violations == 0 ? 0 : 1;
}

// reconstruct: moments -> spectrum, negativity, concurrence interval.
inline int cmd_reconstruct(const detail_cli::MomentInput& in, std::ostream& out) {
  const PTMomentVector p = detail_cli::resolve_moments(in, true);
  json rep;
  rep["p"] = {p.p1, p.p2, p.p3, p.p4};
  Spectrum spec;
  try {
    spec = reconstruct_spectrum(p);
  } catch (const std::domain_error& e) {
    rep["error"] = e.what();
    out << rep.dump(2) << "\n";
    return 2;
  }
  const double neg = negativity(spec);
  const auto ci = concurrence_interval(std::min(1.0, neg));
  rep["spectrum"] = {spec.lambda[0], spec.lambda[1], spec.lambda[2], spec.lambda[3]};
  rep["negativity"] = neg;
  rep["concurrence_interval"] = {ci.first, ci.second};
  rep["classification_2d"] = class2d_name(classify_2d(MomentPair{p.p2, p.p3}));
  out << rep.dump(2) << "\n";
  return 0;
}

// Parse argv and dispatch. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-moment characterization of two-qubit states", "ptmom"};
  app.require_subcommand(1);

  detail_cli::MomentInput min_classify, min_bounds, min_rec;
  double eps = default_eps();

  auto add_moment_opts = [](CLI::App* cmd, detail_cli::MomentInput& mi, bool with_p4) {
    cmd->add_option("--state", mi.state_path, "state JSON file");
    cmd->add_option("--p2", mi.p2, "second PT-moment");
    cmd->add_option("--p3", mi.p3, "third PT-moment");
    if (with_p4) cmd->add_option("--p4", mi.p4, "fourth PT-moment");
  };

  CLI::App* c_classify = app.add_subcommand("classify", "classify a state or moment triple");
  add_moment_opts(c_classify, min_classify, true);
  c_classify->add_option("--eps", eps, "classification band around the dividing surface");

  CLI::App* c_bounds = app.add_subcommand("bounds", "p4 bounds and s-range for (p2, p3)");
  add_moment_opts(c_bounds, min_bounds, false);

  int surf_n = 64;
  std::string surf_out, surf_fmt = "csv";
  CLI::App* c_surface = app.add_subcommand("surface", "export a mesh of region A");
  c_surface->add_option("--n", surf_n, "grid resolution per axis")->required();
  c_surface->add_option("--output", surf_out, "output path")->required();
  c_surface->add_option("--format", surf_fmt, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string fam_name, fam_t, fam_out, fam_fmt = "csv";
  int fam_samples = 0;
  std::uint64_t fam_seed = 0;
  CLI::App* c_family = app.add_subcommand("family", "export a parametric family curve/cloud");
  c_family->add_option("--family", fam_name, "werner or bell")->required();
  c_family->add_option("--samples", fam_samples, "number of samples");
  c_family->add_option("--t", fam_t, "explicit Bell-diagonal 't1,t2,t3'");
  c_family->add_option("--seed", fam_seed, "sampling seed (bell)");
  c_family->add_option("--output", fam_out, "output path")->required();
  c_family->add_option("--format", fam_fmt, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  int ver_n = 10000, ver_oracle = 10;
  std::uint64_t ver_seed = 1;
  double ver_delta = 1e-2;
  CLI::App* c_verify = app.add_subcommand("verify", "Monte Carlo + oracle verification");
  c_verify->add_option("--n", ver_n, "number of random states");
  c_verify->add_option("--seed", ver_seed, "RNG seed");
  c_verify->add_option("--delta", ver_delta, "oracle grid resolution");
  c_verify->add_option("--oracle-subsample", ver_oracle, "states checked against the oracle");

  CLI::App* c_rec = app.add_subcommand("reconstruct", "moments -> spectrum and negativity");
  add_moment_opts(c_rec, min_rec, true);

  try {
    // CLI11 consumes the vector back to front.
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    if (c_classify->parsed()) return cmd_classify(min_classify, eps, out);
    if (c_bounds->parsed()) return cmd_bounds(min_bounds, out);
    if (c_surface->parsed()) return cmd_surface(surf_n, surf_out, surf_fmt, out);
    if (c_family->parsed())
      return cmd_family(fam_name, fam_samples, fam_t, fam_seed, fam_out, fam_fmt, out);
    if (c_verify->parsed()) return cmd_verify(ver_n, ver_seed, ver_delta, ver_oracle, out);
    if (c_rec->parsed()) return cmd_reconstruct(min_rec, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  err << "error: no subcommand\n";
  return 3;
}

}  // namespace cli
}  // namespace ptmom
