#ifndef AUTOPHASE2D_REDUCTION_HPP
#define AUTOPHASE2D_REDUCTION_HPP

// Row-wise reduction of the 2D autocorrelation to the 1D autocorrelation of
// vec(X^T), plus the (n-1)^2 values of R that the 1D sequence cannot carry.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "autophase2d/core.hpp"

namespace autophase2d {

/// One residual value R(i, j) with i in [1, n-1], j in [-(n-1), -1].
/// ell = i*n + j is the 1D lag the value is folded into.
struct ConstraintSpec {
  std::ptrdiff_t i;
  std::ptrdiff_t j;
  std::ptrdiff_t ell;
  double value;

  friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
};

namespace detail {

inline Autocorr2D checked_symmetric(const Autocorr2D& R) {
  const double asym = R.asymmetry();
  if (asym > 1e-8 * R.max_abs()) {
    throw Error(ErrorCode::AsymmetricInput,
                "R(i,j) and R(-i,-j) differ by " + std::to_string(asym));
  }
  return asym == 0.0 ? R : R.symmetrized();
}

}  // namespace detail

/// r(l) for 0 <= l <= n^2-1, with i = l / n and j = l % n:
///   R(i, 0)                 if j == 0
///   R(n-1, j)               if l > n(n-1)
///   R(i, j) + R(i+1, j-n)   otherwise
inline Autocorr1D reduce_2d_to_1d(const Autocorr2D& input) {
  const Autocorr2D R = detail::checked_symmetric(input);
  const auto n = static_cast<std::ptrdiff_t>(R.n());
  const auto len = n * n;
  std::vector<double> half(static_cast<std::size_t>(len));
  for (std::ptrdiff_t ell = 0; ell < len; ++ell) {
    const std::ptrdiff_t i = ell / n;
    const std::ptrdiff_t j = ell % n;
    double value;
    if (j == 0) {
      value = R.at(i, 0);
    } else if (ell > n * (n - 1)) {
      value = R.at(n - 1, j);
    } else {
      value = R.at(i, j) + R.at(i + 1, j - n);
    }
    half[static_cast<std::size_t>(ell)] = value;
  }
  return Autocorr1D::from_nonnegative(half);
}

/// The (n-1)^2 values R(i,j), i > 0, j < 0, ordered by ascending ell.
inline std::vector<ConstraintSpec> residual_constraint_set(const Autocorr2D& R) {
  const auto n = static_cast<std::ptrdiff_t>(R.n());
  std::vector<ConstraintSpec> specs;
  specs.reserve(static_cast<std::size_t>((n - 1) * (n - 1)));
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    for (std::ptrdiff_t j = -(n - 1); j <= -1; ++j) {
      specs.push_back({i, j, i * n + j, R.at(i, j)});
    }
  }
  std::sort(specs.begin(), specs.end(), [](const ConstraintSpec& a, const ConstraintSpec& b) { return a.ell < b.ell; });
  return specs;
}

/// R(n-1, -(n-1)) = x[n-1] * x[n^2-n] for the row-wise vectorized signal.
inline double key_constraint(const Autocorr2D& R) {
  if (R.n() < 2) throw Error(ErrorCode::DegenerateSize, "key constraint needs n >= 2");
  const auto n = static_cast<std::ptrdiff_t>(R.n());
  return R.at(n - 1, -(n - 1));
}

/// Largest lag-wise disagreement between the two routes to r.
inline double verify_reduction(const Matrix2D& X) {
  const Autocorr1D via_2d = reduce_2d_to_1d(autocorr_2d(X));
  const Autocorr1D direct = autocorr_1d(vectorize_rowwise(X));
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.values().size(); ++k) {
    worst = std::max(worst, std::abs(via_2d.values()[k] - direct.values()[k]));
  }
  return worst;
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_REDUCTION_HPP
