#ifndef AUTOPHASE2D_CLI_HPP
#define AUTOPHASE2D_CLI_HPP

// Command dispatch behind the autophase2d executable. Argument parsing lives
// in tools/; this header only needs a filled RunConfig.
//
// Exit codes: 0 success, 1 domain error, 2 I/O or configuration error.
// Errors go to the error stream as one JSON line {"error": ..., "detail": ...}.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "autophase2d/io.hpp"
#include "autophase2d/oracle.hpp"
#include "autophase2d/random.hpp"
#include "autophase2d/solver.hpp"

namespace autophase2d::cli {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"autocorr", "reduce", "solve",  "enumerate",
                                              "census",   "probe",  "oracle", "roundtrip"};
  return names;
}

struct RunConfig {
  std::string command;
  std::string input;
  std::string output = "-";
  std::optional<std::size_t> n;
  std::uint64_t seed = 1;
  double alpha = 1000.0;
  long long bound = 30;
  std::size_t trials = 100;
  /// autocorr only: emit an m x m squared-magnitude grid instead of R.
  std::size_t dft_size = 0;
  SolveOptions opts;
};

/// Overlays keys from a JSON config object onto cfg. Keys mirror the long
/// flags with underscores (tol_match, dft_size, ...).
inline void apply_config_json(RunConfig& cfg, const io::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config file must hold a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const io::json& v = it.value();
      if (key == "command") cfg.command = v.get<std::string>();
      else if (key == "input") cfg.input = v.get<std::string>();
      else if (key == "output") cfg.output = v.get<std::string>();
      else if (key == "n") cfg.n = v.get<std::size_t>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "alpha") cfg.alpha = v.get<double>();
      else if (key == "bound") cfg.bound = v.get<long long>();
      else if (key == "trials") cfg.trials = v.get<std::size_t>();
      else if (key == "dft_size") cfg.dft_size = v.get<std::size_t>();
      else if (key == "tol_root") cfg.opts.tol_root = v.get<double>();
      else if (key == "tol_pair") cfg.opts.tol_pair = v.get<double>();
      else if (key == "tol_conj") cfg.opts.tol_conj = v.get<double>();
      else if (key == "tol_resid") cfg.opts.tol_resid = v.get<double>();
      else if (key == "tol_match") cfg.opts.tol_match = v.get<double>();
      else if (key == "threads") cfg.opts.threads = v.get<std::size_t>();
      else if (key == "secondary_constraints") cfg.opts.secondary_constraints = v.get<bool>();
      else throw Error(ErrorCode::InvalidConfig, "unknown config key \"" + key + "\"");
    }
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

inline io::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open \"" + path + "\"");
  try {
    return io::json::parse(in);
  } catch (const io::json::exception& e) {
    throw Error(ErrorCode::IoError, "\"" + path + "\": " + e.what());
  }
}

/// AUTOPHASE2D_THREADS, when set, caps the worker count (0 = auto).
inline std::size_t threads_from_env(std::size_t fallback) {
  const char* raw = std::getenv("AUTOPHASE2D_THREADS");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') throw Error(ErrorCode::InvalidConfig, "AUTOPHASE2D_THREADS must be an integer");
  return static_cast<std::size_t>(v);
}

inline std::string error_line(std::string_view name, const std::string& detail) {
  io::json j{{"error", std::string(name)}, {"detail", detail}};
  return io::dump(j, -1);
}

namespace detail {

inline void validate(const RunConfig& cfg) {
  const auto& o = cfg.opts;
  for (double t : {o.tol_root, o.tol_pair, o.tol_conj, o.tol_resid, o.tol_match}) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerances must be positive");
  }
  if (cfg.output.empty()) throw Error(ErrorCode::InvalidConfig, "output path must be nonempty");
  const bool needs_input = cfg.command == "autocorr" || cfg.command == "reduce" || cfg.command == "solve" ||
                           cfg.command == "enumerate" || cfg.command == "oracle";
  if (needs_input && cfg.input.empty()) {
    throw Error(ErrorCode::InvalidConfig, "command \"" + cfg.command + "\" needs --input");
  }
  if ((cfg.command == "probe" || cfg.command == "roundtrip") && !cfg.n) {
    throw Error(ErrorCode::InvalidConfig, "command \"" + cfg.command + "\" needs --n");
  }
  if (cfg.command == "census" && cfg.input.empty() && !cfg.n) {
    throw Error(ErrorCode::InvalidConfig, "census needs --input or --n");
  }
}

// An Autocorr2D file, or a squared-magnitude grid converted to one.
inline Autocorr2D read_autocorr_2d(const io::json& j) {
  if (j.contains("magnitudes")) return measurements_to_autocorr_2d(io::magnitudes_from_json(j));
  return io::autocorr2d_from_json(j);
}

// A 1D autocorrelation file, or a 2D one reduced on the fly.
inline Autocorr1D read_autocorr_1d(const io::json& j) {
  if (j.contains("m") && !j.contains("magnitudes")) return io::autocorr1d_from_json(j);
  return reduce_2d_to_1d(read_autocorr_2d(j));
}

struct Output {
  std::string text;
  /// Domain error to report after the output is written (NoMatch).
  std::optional<Error> deferred;
};

inline Output dispatch(const RunConfig& cfg) {
  const std::string& cmd = cfg.command;
  if (cmd == "autocorr") {
    const Matrix2D X = io::matrix_from_json(read_json_file(cfg.input));
    if (cfg.dft_size > 0) return {io::dump(io::to_json(forward_magnitude(X, cfg.dft_size))) + "\n", {}};
    return {io::dump(io::to_json(autocorr_2d(X))) + "\n", {}};
  }
  if (cmd == "reduce") {
    const Autocorr2D R = read_autocorr_2d(read_json_file(cfg.input));
    io::json constraints = io::json::array();
    for (const auto& s : residual_constraint_set(R)) constraints.push_back(io::to_json(s));
    io::json out{{"r", io::to_json(reduce_2d_to_1d(R))}, {"constraints", constraints}};
    out["key_constraint"] = R.n() >= 2 ? io::number(key_constraint(R)) : io::json(nullptr);
    return {io::dump(out) + "\n", {}};
  }
  if (cmd == "solve") {
    const SolveReport rep = solve_2d(read_autocorr_2d(read_json_file(cfg.input)), cfg.opts);
    Output out{io::dump(io::to_json(rep)) + "\n", {}};
    if (rep.matches.empty()) {
      out.deferred = Error(ErrorCode::NoMatch, "no candidate satisfies the key constraint");
    }
    return out;
  }
  if (cmd == "enumerate") {
    const Autocorr1D r = read_autocorr_1d(read_json_file(cfg.input));
    const Enumeration e = enumerate(r, cfg.opts);
    io::json cands = io::json::array();
    for (const auto& c : e.candidates) cands.push_back(io::to_json(c));
    io::json out{{"m", r.m()},
                 {"units", e.units.size()},
                 {"real_units", e.units.real_count()},
                 {"support", e.support},
                 {"candidates", cands}};
    return {io::dump(out) + "\n", {}};
  }
  if (cmd == "census") {
    std::optional<std::uint64_t> seed;
    std::size_t n = 0;
    std::optional<Autocorr1D> r;
    if (!cfg.input.empty()) {
      r = read_autocorr_1d(read_json_file(cfg.input));
      const auto side = autophase2d::detail::exact_sqrt(r->m());
      if (!side) throw Error(ErrorCode::LengthMismatch, "census input length is not a perfect square");
      n = *side;
    } else {
      n = *cfg.n;
      GaussianSource source(cfg.seed);
      r = reduce_2d_to_1d(autocorr_2d(source.matrix(n)));
      seed = cfg.seed;
    }
    CensusData census = ambiguity_census(*r, n, cfg.opts);
    census.seed = seed;
    return {io::census_csv(census), {}};
  }
  if (cmd == "probe") {
    return {io::dump(io::to_json(appendix_probe(*cfg.n, cfg.alpha))) + "\n", {}};
  }
  if (cmd == "oracle") {
    const Autocorr2D R = read_autocorr_2d(read_json_file(cfg.input));
    return {io::dump(io::to_json(exhaustive_integer_search(R, cfg.bound))) + "\n", {}};
  }
  if (cmd == "roundtrip") {
    return {io::dump(io::to_json(planted_roundtrip(*cfg.n, cfg.trials, cfg.seed, cfg.opts))) + "\n", {}};
  }
  throw Error(ErrorCode::InvalidConfig, "unknown command \"" + cmd + "\"");
}

}  // namespace detail

/// Runs one command. Results go to cfg.output ("-" means out).
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    detail::validate(cfg);
    detail::Output result = detail::dispatch(cfg);
    if (cfg.output == "-") {
      out << result.text;
      out.flush();
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw Error(ErrorCode::IoError, "cannot write \"" + cfg.output + "\"");
      file << result.text;
      if (!file) throw Error(ErrorCode::IoError, "write to \"" + cfg.output + "\" failed");
    }
    if (result.deferred) {
      err << error_line(result.deferred->name(), result.deferred->detail()) << '\n';
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << error_line(e.name(), e.detail()) << '\n';
    return is_domain_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << error_line("InternalError", e.what()) << '\n';
    return 1;
  }
}

}  // namespace autophase2d::cli

#endif  // AUTOPHASE2D_CLI_HPP
