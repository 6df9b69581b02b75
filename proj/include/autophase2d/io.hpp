#ifndef AUTOPHASE2D_IO_HPP
#define AUTOPHASE2D_IO_HPP

// JSON and CSV encodings. Floats are written with 17 significant digits in
// the C locale; NaN and infinities become null.

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "autophase2d/core.hpp"
#include "autophase2d/oracle.hpp"
#include "autophase2d/reduction.hpp"
#include "autophase2d/solver.hpp"

namespace autophase2d::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat && indent >= 0 ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write(os, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

/// Serializes with 17-significant-digit floats. indent < 0 gives one line.
inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::write(os, j, indent, 0);
  return os.str();
}

inline json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline json numbers(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

inline json rows_of(std::span<const double> values, std::size_t side) {
  json out = json::array();
  for (std::size_t r = 0; r < side; ++r) out.push_back(numbers(values.subspan(r * side, side)));
  return out;
}

// ---- encoders ------------------------------------------------------------

inline json to_json(const Matrix2D& X) { return {{"n", X.n()}, {"rows", rows_of(X.values(), X.n())}}; }

inline json to_json(const Autocorr2D& R) { return {{"n", R.n()}, {"values", rows_of(R.values(), R.side())}}; }

inline json to_json(const Autocorr1D& r) { return {{"m", r.m()}, {"values", numbers(r.values())}}; }

inline json to_json(const MagnitudeGrid& Y) {
  return {{"n", Y.n()}, {"m", Y.m()}, {"magnitudes", rows_of(Y.values(), Y.m())}};
}

inline json to_json(const ConstraintSpec& s) {
  return {{"i", s.i}, {"j", s.j}, {"ell", s.ell}, {"value", number(s.value)}};
}

inline json to_json(const Candidate& c) {
  return {{"values", numbers(c.values.values())},
          {"flips", c.flips},
          {"autocorr_residual", number(c.autocorr_residual)},
          {"f_value", number(c.f_value)}};
}

inline json to_json(const SolveOptions& o) {
  return {{"tol_root", number(o.tol_root)},   {"tol_pair", number(o.tol_pair)},
          {"tol_conj", number(o.tol_conj)},   {"tol_resid", number(o.tol_resid)},
          {"tol_match", number(o.tol_match)}, {"secondary_constraints", o.secondary_constraints}};
}

inline json to_json(const SolveReport& rep) {
  json matches = json::array();
  for (const auto& c : rep.matches) matches.push_back(to_json(c));
  return {{"n", rep.n},
          {"candidates_total", rep.candidates_total},
          {"matches", matches},
          {"solution", rep.solution ? to_json(*rep.solution) : json(nullptr)},
          {"unique", rep.unique},
          {"residuals", numbers(rep.residuals)},
          {"key_constraint_value", number(rep.key_constraint_value)},
          {"tolerances", to_json(rep.tolerances)},
          {"units", rep.units},
          {"real_units", rep.real_units},
          {"support", rep.support},
          {"match_classes", rep.match_classes},
          {"secondary_applied", rep.secondary_applied},
          {"solution_residual_2d", number(rep.solution_residual_2d)},
          {"verified", rep.verified}};
}

inline json to_json(const ProbeResult& p) {
  return {{"n", p.n},
          {"alpha", number(p.alpha)},
          {"f1_norm", number(p.f1_norm)},
          {"f2_norm", number(p.f2_norm)},
          {"diff_norm", number(p.diff_norm)},
          {"predicted", number(p.predicted)},
          {"f1_predicted", number(p.f1_predicted)},
          {"f2_predicted", number(p.f2_predicted)},
          {"k1", number(p.k1)},
          {"k2", number(p.k2)},
          {"k3", number(p.k3)}};
}

inline json to_json(const OracleResult& o) {
  auto list = [](const std::vector<Matrix2D>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
  };
  return {{"solutions", list(o.solutions)},
          {"classes", list(o.classes)},
          {"shift_classes", list(o.shift_classes)},
          {"search_space_size", o.search_space_size},
          {"bound", o.bound}};
}

inline json to_json(const RoundtripReport& r) {
  json outcomes = json::array();
  for (const auto& t : r.outcomes) {
    outcomes.push_back({{"index", t.index},
                        {"status", std::string(status_name(t.status))},
                        {"reason", t.reason},
                        {"max_residual", number(t.max_residual)}});
  }
  return {{"n", r.n},
          {"trials", r.trials},
          {"seed", r.seed},
          {"rng", r.rng},
          {"successes", r.successes},
          {"failures", r.failures},
          {"flagged", r.flagged},
          {"silent_wrong", r.silent_wrong},
          {"max_residual", number(r.max_residual)},
          {"outcomes", outcomes}};
}

inline json census_summary(const CensusData& c) {
  json out = {{"n", c.n},
              {"c1", number(c.c1)},
              {"candidate_count", c.candidate_count},
              {"units", c.units},
              {"all_real_count", c.all_real_count},
              {"matches_all_real_count", c.candidate_count == c.all_real_count},
              {"d", numbers(c.d)},
              {"v", numbers(c.v)}};
  out["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return out;
}

/// index,d,log_gap with an empty log_gap for a zero gap and for the last row.
inline std::string census_csv(const CensusData& c) {
  std::string out = "index,d,log_gap\n";
  for (std::size_t i = 0; i < c.d.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(c.d[i]);
    out += ',';
    if (i < c.v.size() && std::isfinite(c.v[i])) out += format_double(c.v[i]);
    out += '\n';
  }
  return out;
}

// ---- decoders ------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<double>> read_rows(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::IoError, std::string("missing array field \"") + key + "\"");
  }
  return j.at(key).get<std::vector<std::vector<double>>>();
}

inline std::size_t read_size(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw Error(ErrorCode::IoError, std::string("missing integer field \"") + key + "\"");
  }
  const auto v = j.at(key).get<long long>();
  if (v <= 0) throw Error(ErrorCode::IoError, std::string("field \"") + key + "\" must be positive");
  return static_cast<std::size_t>(v);
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, e.what());
  }
}

}  // namespace detail

inline Matrix2D matrix_from_json(const json& j) {
  return detail::guarded([&] {
    auto X = Matrix2D::from_rows(detail::read_rows(j, "rows"));
    if (j.contains("n") && detail::read_size(j, "n") != X.n()) {
      throw Error(ErrorCode::LengthMismatch, "\"n\" disagrees with the number of rows");
    }
    return X;
  });
}

inline Autocorr2D autocorr2d_from_json(const json& j) {
  return detail::guarded([&] {
    auto R = Autocorr2D::from_rows(detail::read_rows(j, "values"));
    if (j.contains("n") && detail::read_size(j, "n") != R.n()) {
      throw Error(ErrorCode::LengthMismatch, "\"n\" disagrees with the 2n-1 rows of \"values\"");
    }
    return R;
  });
}

inline Autocorr1D autocorr1d_from_json(const json& j) {
  return detail::guarded([&] {
    if (!j.contains("values") || !j.at("values").is_array()) {
      throw Error(ErrorCode::IoError, "missing array field \"values\"");
    }
    auto values = j.at("values").get<std::vector<double>>();
    const std::size_t m = detail::read_size(j, "m");
    return Autocorr1D(m, std::move(values));
  });
}

inline MagnitudeGrid magnitudes_from_json(const json& j) {
  return detail::guarded([&] {
    const auto rows = detail::read_rows(j, "magnitudes");
    const std::size_t m = detail::read_size(j, "m");
    std::vector<double> values;
    for (const auto& row : rows) {
      if (row.size() != m) throw Error(ErrorCode::LengthMismatch, "magnitude rows must have length m");
      values.insert(values.end(), row.begin(), row.end());
    }
    return MagnitudeGrid(detail::read_size(j, "n"), m, std::move(values));
  });
}

}  // namespace autophase2d::io

#endif  // AUTOPHASE2D_IO_HPP
