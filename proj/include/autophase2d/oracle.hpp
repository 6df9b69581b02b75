#ifndef AUTOPHASE2D_ORACLE_HPP
#define AUTOPHASE2D_ORACLE_HPP

// Brute-force checks that do not go through the polynomial machinery:
// exhaustive integer search over small matrices, and planted round trips.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "autophase2d/core.hpp"
#include "autophase2d/random.hpp"
#include "autophase2d/solver.hpp"

namespace autophase2d {

struct OracleResult {
  /// Every integer matrix with autocorrelation exactly R, lexicographic order.
  std::vector<Matrix2D> solutions;
  /// One representative per class under {X, -X, rot180 X, -rot180 X}.
  std::vector<Matrix2D> classes;
  /// Classes after also identifying translates of the nonzero support.
  std::vector<Matrix2D> shift_classes;
  std::uint64_t search_space_size = 0;
  long long bound = 0;
};

namespace detail {

using IntMatrix = std::vector<long long>;

inline IntMatrix int_autocorr_2d(const IntMatrix& X, long long n) {
  const long long side = 2 * n - 1;
  IntMatrix R(static_cast<std::size_t>(side * side), 0);
  for (long long a = 0; a < n; ++a) {
    for (long long b = 0; b < n; ++b) {
      const long long xab = X[static_cast<std::size_t>(a * n + b)];
      if (xab == 0) continue;
      for (long long c = 0; c < n; ++c) {
        for (long long d = 0; d < n; ++d) {
          R[static_cast<std::size_t>((c - a + n - 1) * side + (d - b + n - 1))] +=
              xab * X[static_cast<std::size_t>(c * n + d)];
        }
      }
    }
  }
  return R;
}

// Lexicographically largest of the four sign/rotation variants.
inline IntMatrix trivial_class_key(const IntMatrix& X) {
  IntMatrix best;
  for (bool rotate : {false, true}) {
    for (long long sign : {1LL, -1LL}) {
      IntMatrix v(X.size());
      for (std::size_t k = 0; k < X.size(); ++k) v[k] = sign * (rotate ? X[X.size() - 1 - k] : X[k]);
      if (best.empty() || v > best) best = std::move(v);
    }
  }
  return best;
}

// Crop to the bounding box of the nonzero entries, then classify; the box
// dimensions lead the key so differently shaped crops never collide.
inline IntMatrix shift_class_key(const IntMatrix& X, long long n) {
  long long r0 = n, r1 = -1, c0 = n, c1 = -1;
  for (long long r = 0; r < n; ++r) {
    for (long long c = 0; c < n; ++c) {
      if (X[static_cast<std::size_t>(r * n + c)] != 0) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
  }
  if (r1 < 0) return {0, 0};
  IntMatrix crop;
  for (long long r = r0; r <= r1; ++r) {
    for (long long c = c0; c <= c1; ++c) crop.push_back(X[static_cast<std::size_t>(r * n + c)]);
  }
  IntMatrix key = trivial_class_key(crop);
  key.insert(key.begin(), {r1 - r0 + 1, c1 - c0 + 1});
  return key;
}

inline Matrix2D to_matrix(const IntMatrix& X, std::size_t n) {
  return Matrix2D(n, std::vector<double>(X.begin(), X.end()));
}

}  // namespace detail

/// All integer matrices with entries in [-bound, bound] whose 2D
/// autocorrelation equals R exactly. R must hold integers.
inline OracleResult exhaustive_integer_search(const Autocorr2D& R, long long bound) {
  if (bound < 0) throw Error(ErrorCode::InvalidConfig, "bound must be nonnegative");
  const auto n = static_cast<long long>(R.n());
  const std::size_t cells = static_cast<std::size_t>(n * n);

  OracleResult out;
  out.bound = bound;
  double space = std::pow(static_cast<double>(2 * bound + 1), static_cast<double>(cells));
  if (space > 1e8) {
    throw Error(ErrorCode::SearchSpaceTooLarge, "search space (2*bound+1)^(n^2) = " + std::to_string(space) +
                                                    " exceeds 1e8");
  }
  out.search_space_size = static_cast<std::uint64_t>(std::llround(space));

  detail::IntMatrix target(R.values().size());
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double v = R.values()[k];
    if (std::abs(v - std::round(v)) > 1e-9 * std::max(1.0, std::abs(v))) {
      throw Error(ErrorCode::NonIntegerInput, "exhaustive search needs an integer autocorrelation");
    }
    target[k] = std::llround(v);
  }
  const long long side = 2 * n - 1;
  auto target_at = [&](long long i, long long j) {
    return target[static_cast<std::size_t>((i + n - 1) * side + (j + n - 1))];
  };
  const long long energy = target_at(0, 0);
  const long long corner = target_at(n - 1, n - 1);  // X(0,0) X(n-1,n-1)
  if (energy < 0) return out;

  // Corners first so the corner product prunes early.
  std::vector<std::size_t> order{0};
  if (cells > 1) order.push_back(cells - 1);
  for (std::size_t k = 1; k + 1 < cells; ++k) order.push_back(k);

  std::vector<detail::IntMatrix> found;
  detail::IntMatrix X(cells, 0);
  auto search = [&](auto&& self, std::size_t depth, long long sum_sq) -> void {
    if (depth == order.size()) {
      if (sum_sq == energy && detail::int_autocorr_2d(X, n) == target) found.push_back(X);
      return;
    }
    const std::size_t cell = order[depth];
    for (long long v = -bound; v <= bound; ++v) {
      const long long s = sum_sq + v * v;
      if (s > energy) continue;
      X[cell] = v;
      if (depth == 1 && X[0] * X[cells - 1] != corner) continue;
      if (cells == 1 && v * v != corner) continue;
      self(self, depth + 1, s);
    }
    X[cell] = 0;
  };
  search(search, 0, 0);

  std::sort(found.begin(), found.end());
  std::map<detail::IntMatrix, std::size_t> class_seen;
  std::map<detail::IntMatrix, std::size_t> shift_seen;
  for (const auto& M : found) {
    const auto un = static_cast<std::size_t>(n);
    out.solutions.push_back(detail::to_matrix(M, un));
    if (class_seen.emplace(detail::trivial_class_key(M), out.classes.size()).second) {
      out.classes.push_back(detail::to_matrix(M, un));
    }
    if (shift_seen.emplace(detail::shift_class_key(M, n), out.shift_classes.size()).second) {
      out.shift_classes.push_back(detail::to_matrix(M, un));
    }
  }
  return out;
}

struct TrialOutcome {
  enum class Status { Success, Flagged, SilentWrong };

  std::size_t index = 0;
  Status status = Status::Flagged;
  /// Empty on success; otherwise an error name, "NoMatch", "MultipleMatches"
  /// or "UnverifiedSolution".
  std::string reason;
  double max_residual = 0.0;
};

inline std::string_view status_name(TrialOutcome::Status s) noexcept {
  switch (s) {
    case TrialOutcome::Status::Success: return "success";
    case TrialOutcome::Status::Flagged: return "flagged";
    case TrialOutcome::Status::SilentWrong: return "silent_wrong";
  }
  return "unknown";
}

struct RoundtripReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t flagged = 0;
  std::size_t silent_wrong = 0;
  /// Largest candidate autocorrelation residual across all enumerations.
  double max_residual = 0.0;
  std::vector<TrialOutcome> outcomes;
};

/// Draws n x n standard gaussian matrices and checks that solve_2d recovers
/// each one up to trivial ambiguity. A failure is flagged when the solver
/// signals it (error, no match, several classes, or a solution whose 2D
/// autocorrelation does not match); a unique verified answer that is not
/// equivalent to the planted matrix counts as silent_wrong.
inline RoundtripReport planted_roundtrip(std::size_t n, std::size_t trials, std::uint64_t seed,
                                         const SolveOptions& opts = {}) {
  RoundtripReport out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.rng = std::string(GaussianSource::kAlgorithm);

  GaussianSource source(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix2D X = source.matrix(n);
    TrialOutcome outcome;
    outcome.index = t;
    try {
      const SolveReport rep = solve_2d(autocorr_2d(X), opts);
      for (double r : rep.residuals) outcome.max_residual = std::max(outcome.max_residual, r);
      const double tol = 1e-6 * std::max(1.0, detail::max_abs(X.values()));
      if (rep.matches.empty()) {
        outcome.reason = "NoMatch";
      } else if (!rep.unique) {
        outcome.reason = "MultipleMatches";
      } else if (trivially_equivalent_2d(X, *rep.solution, tol)) {
        outcome.status = TrialOutcome::Status::Success;
      } else if (!rep.verified) {
        outcome.reason = "UnverifiedSolution";
      } else {
        outcome.status = TrialOutcome::Status::SilentWrong;
        outcome.reason = "NotEquivalent";
      }
    } catch (const Error& e) {
      outcome.reason = std::string(e.name());
    }
    out.max_residual = std::max(out.max_residual, outcome.max_residual);
    switch (outcome.status) {
      case TrialOutcome::Status::Success: ++out.successes; break;
      case TrialOutcome::Status::Flagged: ++out.failures; ++out.flagged; break;
      case TrialOutcome::Status::SilentWrong: ++out.failures; ++out.silent_wrong; break;
    }
    out.outcomes.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_ORACLE_HPP
