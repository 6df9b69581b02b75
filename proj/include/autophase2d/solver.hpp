#ifndef AUTOPHASE2D_SOLVER_HPP
#define AUTOPHASE2D_SOLVER_HPP

// Candidate enumeration, key-constraint filtering and the end-to-end 2D
// recovery: reduce R to r, enumerate every real signal with autocorrelation
// r up to trivial ambiguities, keep those with y[n-1] y[n^2-n] = R(n-1,-(n-1)),
// reshape.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "autophase2d/core.hpp"
#include "autophase2d/parallel.hpp"
#include "autophase2d/polyfactor.hpp"
#include "autophase2d/reduction.hpp"

namespace autophase2d {

struct SolveOptions {
  double tol_root = 1e-8;
  double tol_pair = 1e-6;
  double tol_conj = 1e-8;
  double tol_resid = 1e-6;
  double tol_match = 1e-6;
  /// Worker count for candidate reconstruction; 0 picks the hardware count.
  std::size_t threads = 0;
  /// When the key constraint leaves several classes, additionally test the
  /// other residual values R(i,j). Experimental; not needed for uniqueness.
  bool secondary_constraints = false;

  FactorTolerances factor_tolerances() const { return {tol_root, tol_pair, tol_conj}; }
};

struct Enumeration {
  FlipUnits units;
  /// Length of the nonzero-endpoint part of the signal; m unless r vanishes
  /// at the outermost lags, in which case candidates are zero-padded at the end.
  std::size_t support = 0;
  std::vector<Candidate> candidates;
};

namespace detail {

inline std::optional<std::size_t> exact_sqrt(std::size_t m) {
  auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
  if (s * s == m) return s;
  return std::nullopt;
}

}  // namespace detail

/// Every real signal with autocorrelation r, one per trivial class. Unit 0 is
/// held unflipped (flipping all units only reverses the signal), so the
/// result has 2^(u-1) entries in ascending flip-mask order.
inline Enumeration enumerate(const Autocorr1D& r, const SolveOptions& opts = {}) {
  const std::size_t m = r.m();
  const double peak = r.max_abs();
  const auto n = detail::exact_sqrt(m);

  Enumeration out;
  if (peak == 0.0) {
    out.candidates.push_back(Candidate{Signal1D(std::vector<double>(m, 0.0)), 0, 0.0, n ? 0.0 : std::nan("")});
    return out;
  }

  std::size_t support = m;
  while (support > 1 && std::abs(r.lag(static_cast<std::ptrdiff_t>(support) - 1)) <= 1e-12 * peak) --support;
  out.support = support;

  const std::vector<double> half = r.nonnegative_lags();
  const Autocorr1D trimmed = Autocorr1D::from_nonnegative(std::span<const double>(half).first(support));
  out.units = factor_units(trimmed, opts.factor_tolerances());

  const std::size_t u = out.units.size();
  if (u > 62) throw Error(ErrorCode::SearchSpaceTooLarge, "too many flip units to enumerate");
  const std::size_t count = u == 0 ? 1 : (std::size_t{1} << (u - 1));
  const double r_peak = trimmed.endpoint();

  out.candidates.assign(count, Candidate{Signal1D(std::vector<double>(m, 0.0))});
  parallel_for(count, opts.threads, [&](std::size_t k) {
    const FlipMask mask = static_cast<FlipMask>(k) << 1;
    Candidate c = reconstruct_candidate(out.units, mask, r_peak);
    if (support < m) {
      std::vector<double> padded(c.values.values().begin(), c.values.values().end());
      padded.resize(m, 0.0);
      c.values = Signal1D(std::move(padded));
    }
    c.autocorr_residual = autocorr_residual(c.values, r);
    if (n) c.f_value = f_direct(c.values, *n);
    out.candidates[k] = std::move(c);
  });

  std::string offending;
  for (const Candidate& c : out.candidates) {
    if (!(c.autocorr_residual <= opts.tol_resid)) {
      if (!offending.empty()) offending += ",";
      offending += std::to_string(c.flips);
    }
  }
  if (!offending.empty()) {
    throw Error(ErrorCode::ResidualExceeded, "autocorrelation residual above tolerance for flip masks [" + offending + "]");
  }
  return out;
}

inline std::vector<Candidate> enumerate_candidates(const Autocorr1D& r, const SolveOptions& opts = {}) {
  return enumerate(r, opts).candidates;
}

/// Candidates with |y[n-1] y[n^2-n] - c| <= tol_match * max(|c|, scale_floor).
inline std::vector<Candidate> filter_by_constraint(const std::vector<Candidate>& cands, double c, std::size_t n,
                                                   double tol_match, double scale_floor = 0.0) {
  std::vector<Candidate> kept;
  const double bound = std::isinf(tol_match) ? tol_match : tol_match * std::max(std::abs(c), scale_floor);
  for (const Candidate& cand : cands) {
    if (std::isinf(bound) || std::abs(f_direct(cand.values, n) - c) <= bound) kept.push_back(cand);
  }
  return kept;
}

struct SolveReport {
  std::size_t n = 0;
  std::size_t candidates_total = 0;
  std::vector<Candidate> matches;
  std::optional<Matrix2D> solution;
  bool unique = false;
  /// Autocorrelation residual of every enumerated candidate, in enumeration order.
  std::vector<double> residuals;
  double key_constraint_value = 0.0;
  SolveOptions tolerances;

  std::size_t units = 0;
  std::size_t real_units = 0;
  std::size_t support = 0;
  std::size_t match_classes = 0;
  bool secondary_applied = false;
  /// max |autocorr_2d(solution) - R| / max|R|; NaN without a solution.
  double solution_residual_2d = std::numeric_limits<double>::quiet_NaN();
  bool verified = false;
};

namespace detail {

inline std::size_t count_classes(const std::vector<Candidate>& cands) {
  std::vector<const Candidate*> reps;
  for (const Candidate& c : cands) {
    const double tol = 1e-6 * std::max(1.0, max_abs(c.values.values()));
    const bool seen = std::any_of(reps.begin(), reps.end(), [&](const Candidate* rep) {
      return trivially_equivalent_1d(rep->values, c.values, tol);
    });
    if (!seen) reps.push_back(&c);
  }
  return reps.size();
}

inline double relative_residual_2d(const Matrix2D& X, const Autocorr2D& R) {
  const Autocorr2D XX = autocorr_2d(X);
  double worst = 0.0;
  for (std::size_t k = 0; k < XX.values().size(); ++k) {
    worst = std::max(worst, std::abs(XX.values()[k] - R.values()[k]));
  }
  const double scale = R.max_abs();
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace detail

/// Full recovery from a 2D autocorrelation. An empty match list means no
/// candidate met the key constraint (NoMatch); several classes set unique=false.
inline SolveReport solve_2d(const Autocorr2D& input, const SolveOptions& opts = {}) {
  const Autocorr2D R = detail::checked_symmetric(input);
  const std::size_t n = R.n();
  const Autocorr1D r = reduce_2d_to_1d(R);

  SolveReport report;
  report.n = n;
  report.tolerances = opts;
  const auto ni = static_cast<std::ptrdiff_t>(n);
  // Equal to key_constraint(R) for n >= 2; for n = 1 it is R(0,0) = x[0]^2.
  report.key_constraint_value = R.at(ni - 1, -(ni - 1));

  Enumeration e = enumerate(r, opts);
  report.candidates_total = e.candidates.size();
  report.units = e.units.size();
  report.real_units = e.units.real_count();
  report.support = e.support;
  report.residuals.reserve(e.candidates.size());
  for (const Candidate& c : e.candidates) report.residuals.push_back(c.autocorr_residual);

  const double floor = 1e-9 * r.max_abs();
  report.matches = filter_by_constraint(e.candidates, report.key_constraint_value, n, opts.tol_match, floor);
  report.match_classes = detail::count_classes(report.matches);

  if (report.match_classes > 1 && opts.secondary_constraints) {
    report.secondary_applied = true;
    const auto specs = residual_constraint_set(R);
    std::vector<Candidate> kept;
    for (const Candidate& c : report.matches) {
      const Autocorr2D CC = autocorr_2d(reshape_rowwise(c.values, n));
      const bool ok = std::all_of(specs.begin(), specs.end(), [&](const ConstraintSpec& s) {
        return std::abs(CC.at(s.i, s.j) - s.value) <= opts.tol_match * std::max(std::abs(s.value), floor);
      });
      if (ok) kept.push_back(c);
    }
    report.matches = std::move(kept);
    report.match_classes = detail::count_classes(report.matches);
  }

  report.unique = report.match_classes == 1;
  if (!report.matches.empty()) {
    report.solution = reshape_rowwise(report.matches.front().values, n);
    report.solution_residual_2d = detail::relative_residual_2d(*report.solution, R);
    report.verified = report.solution_residual_2d <= opts.tol_resid;
  }
  return report;
}

inline SolveReport solve_2d(const MagnitudeGrid& Y, const SolveOptions& opts = {}) {
  return solve_2d(measurements_to_autocorr_2d(Y), opts);
}

struct CensusData {
  /// Normalized key-constraint products, ascending, d.back() == 1.
  std::vector<double> d;
  /// log(d[i+1] - d[i]); -inf for a zero gap.
  std::vector<double> v;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  /// Scale c1 applied to the raw products.
  double c1 = 1.0;
  std::size_t candidate_count = 0;
  std::size_t units = 0;
  /// Count assuming every zero is real, 2^(n^2-2).
  std::size_t all_real_count = 0;
};

/// Sorted, normalized key-constraint products of every candidate. c1 is
/// chosen so the largest normalized entry is exactly 1: 1/max(p) when some
/// product is positive, otherwise 1/min(p).
inline CensusData ambiguity_census(const Autocorr1D& r, std::size_t n, const SolveOptions& opts = {}) {
  if (r.m() != n * n) throw Error(ErrorCode::LengthMismatch, "census needs a length-n^2 signal");
  const Enumeration e = enumerate(r, opts);

  CensusData out;
  out.n = n;
  out.candidate_count = e.candidates.size();
  out.units = e.units.size();
  out.all_real_count = n * n >= 2 ? (std::size_t{1} << (n * n - 2)) : 1;

  std::vector<double> products;
  products.reserve(e.candidates.size());
  for (const Candidate& c : e.candidates) products.push_back(f_direct(c.values, n));
  const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
  if (*hi > 0.0) {
    out.c1 = 1.0 / *hi;
  } else if (*lo < 0.0) {
    out.c1 = 1.0 / *lo;
  }
  for (double& p : products) p *= out.c1;
  std::sort(products.begin(), products.end());
  out.d = std::move(products);

  out.v.reserve(out.d.size() - 1);
  for (std::size_t i = 0; i + 1 < out.d.size(); ++i) {
    const double gap = out.d[i + 1] - out.d[i];
    out.v.push_back(gap > 0.0 ? std::log(gap) : -std::numeric_limits<double>::infinity());
  }
  return out;
}

struct ProbeResult {
  std::size_t n = 0;
  double alpha = 0.0;
  double f1_norm = 0.0;
  double f2_norm = 0.0;
  double diff_norm = 0.0;
  /// k2^2 - k1 k3
  double predicted = 0.0;
  /// Leading terms (k2 - k3)^2 and k3 (k1 - 2 k2 + k3).
  double f1_predicted = 0.0;
  double f2_predicted = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// C(a, b), zero outside 0 <= b <= a.
inline double binomial(long long a, long long b) {
  if (b < 0 || a < 0 || b > a) return 0.0;
  double out = 1.0;
  for (long long k = 1; k <= b; ++k) out = out * static_cast<double>(a - b + k) / static_cast<double>(k);
  return std::round(out);
}

/// Evaluates the normalized key-constraint product at the zero vector
/// (alpha, 1/alpha, 1, ..., 1) for the unflipped signal and for the signal
/// with the second zero reflected, and compares their difference with the
/// large-alpha prediction k2^2 - k1 k3, k_i = C(n^2 - i, n - i).
inline ProbeResult appendix_probe(std::size_t n, double alpha) {
  if (n < 2) throw Error(ErrorCode::DegenerateSize, "probe needs n >= 2");
  if (!(alpha > 10.0)) throw Error(ErrorCode::InvalidConfig, "probe needs alpha > 10");

  const std::size_t zeros = n * n - 1;
  std::vector<cplx> base(zeros, cplx{1.0, 0.0});
  base[0] = alpha;
  base[1] = 1.0 / alpha;
  std::vector<cplx> flipped(base);
  flipped[1] = 1.0 / std::conj(base[1]);

  auto normalized_f = [&](const std::vector<cplx>& gammas) {
    std::vector<cplx> reflected(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) reflected[k] = 1.0 / std::conj(gammas[k]);
    return (elementary_symmetric(gammas, n - 1) * elementary_symmetric(reflected, n - 1)).real();
  };

  ProbeResult out;
  out.n = n;
  out.alpha = alpha;
  const double a2 = alpha * alpha;
  out.f1_norm = normalized_f(base) / a2;
  out.f2_norm = normalized_f(flipped) / a2;
  out.diff_norm = out.f1_norm - out.f2_norm;

  const auto nn = static_cast<long long>(n * n);
  const auto ns = static_cast<long long>(n);
  out.k1 = binomial(nn - 1, ns - 1);
  out.k2 = binomial(nn - 2, ns - 2);
  out.k3 = binomial(nn - 3, ns - 3);
  out.predicted = out.k2 * out.k2 - out.k1 * out.k3;
  out.f1_predicted = (out.k2 - out.k3) * (out.k2 - out.k3);
  out.f2_predicted = out.k3 * (out.k1 - 2.0 * out.k2 + out.k3);
  return out;
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_SOLVER_HPP
