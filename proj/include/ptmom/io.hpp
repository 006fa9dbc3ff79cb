#pragma once

// JSON/CSV interchange: the state file format, moment vectors, and the
// 17-significant-digit number formatting shared by all exporters.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ptmom/moments.hpp"
#include "ptmom/qstate.hpp"

namespace ptmom {

// Round-trip-exact decimal formatting for doubles.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// State file: {"matrix": 4 rows x 4 cols of [re, im]}.
inline DensityMatrix state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("matrix"))
    throw std::invalid_argument("state file: missing field \"matrix\"");
  const auto& rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != 4)
    throw std::invalid_argument("state file: \"matrix\" must have exactly 4 rows");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("state file: row " + std::to_string(i) +
                                  " must have exactly 4 entries");
    for (int jj = 0; jj < 4; ++jj) {
      const auto& ent = row.at(jj);
      if (!ent.is_array() || ent.size() != 2 || !ent.at(0).is_number() || !ent.at(1).is_number())
        throw std::invalid_argument("state file: entry (" + std::to_string(i) + "," +
                                    std::to_string(jj) + ") must be a [re, im] pair");
      m(i, jj) = cplx(ent.at(0).get<double>(), ent.at(1).get<double>());
    }
  }
  return DensityMatrix::from_matrix(m);
}

inline DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("state file is not valid JSON: " + std::string(e.what()));
  }
  return state_from_json(j);
}

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j)
      row.push_back({rho.m(i, j).real(), rho.m(i, j).imag()});
    rows.push_back(row);
  }
  return nlohmann::json{{"matrix", rows}};
}

// Moment vector JSON: {"p": [p1, p2, p3, p4]}.
inline PTMomentVector moments_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p"))
    throw std::invalid_argument("moment file: missing field \"p\"");
  const auto& arr = j.at("p");
  if (!arr.is_array() || arr.size() != 4)
    throw std::invalid_argument("moment file: \"p\" must hold exactly 4 numbers");
  for (int i = 0; i < 4; ++i)
    if (!arr.at(i).is_number())
      throw std::invalid_argument("moment file: p[" + std::to_string(i) + "] must be a number");
  return {arr.at(0).get<double>(), arr.at(1).get<double>(), arr.at(2).get<double>(),
          arr.at(3).get<double>()};
}

inline nlohmann::json moments_to_json(const PTMomentVector& p) {
  return nlohmann::json{{"p", {p.p1, p.p2, p.p3, p.p4}}};
}

// CSV row form p1,p2,p3,p4.
inline std::string moments_to_csv_row(const PTMomentVector& p) {
  return fmt17(p.p1) + "," + fmt17(p.p2) + "," + fmt17(p.p3) + "," + fmt17(p.p4);
}

inline PTMomentVector moments_from_csv_row(const std::string& line) {
  std::istringstream ss(line);
  double v[4];
  char comma;
  for (int i = 0; i < 4; ++i) {
    if (!(ss >> v[i])) throw std::invalid_argument("moment CSV row: expected 4 numbers");
    if (i < 3 && !(ss >> comma)) throw std::invalid_argument("moment CSV row: expected commas");
  }
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace ptmom
