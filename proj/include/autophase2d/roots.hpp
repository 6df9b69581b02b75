#ifndef AUTOPHASE2D_ROOTS_HPP
#define AUTOPHASE2D_ROOTS_HPP

// Polynomial root finding: companion-matrix eigenvalues as starting points,
// refined by Aberth-Ehrlich simultaneous iteration.
//
// Evaluation switches to the reversed polynomial outside the unit disk so
// that residuals stay meaningful for high degree (|P(z)| / |z|^deg).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "autophase2d/error.hpp"

namespace autophase2d {

using cplx = std::complex<double>;

namespace detail {

struct HornerResult {
  cplx value;
  cplx derivative;
};

// coeffs ascending.
inline HornerResult horner(std::span<const double> coeffs, cplx z) noexcept {
  cplx p{0.0, 0.0};
  cplx dp{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[k];
  }
  return {p, dp};
}

// Same polynomial with coefficient order flipped, i.e. z^deg P(1/z).
inline HornerResult horner_reversed(std::span<const double> coeffs, cplx w) noexcept {
  cplx p{0.0, 0.0};
  cplx dp{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    dp = dp * w + p;
    p = p * w + coeffs[k];
  }
  return {p, dp};
}

// Newton step P(z) / P'(z), stable on both sides of the unit circle.
inline cplx newton_ratio(std::span<const double> coeffs, cplx z) noexcept {
  const double deg = static_cast<double>(coeffs.size() - 1);
  if (std::abs(z) <= 1.0) {
    const auto h = horner(coeffs, z);
    return h.value / h.derivative;
  }
  // P(z) = z^d Q(w), P'(z) = z^{d-1} (d Q(w) - w Q'(w)), with w = 1/z.
  const cplx w = 1.0 / z;
  const auto h = horner_reversed(coeffs, w);
  return z * h.value / (deg * h.value - w * h.derivative);
}

}  // namespace detail

/// |P(z)| / max(1, |z|)^deg, for coefficients already normalized to max|c| = 1.
inline double scaled_residual(std::span<const double> coeffs, cplx z) noexcept {
  if (std::abs(z) <= 1.0) return std::abs(detail::horner(coeffs, z).value);
  return std::abs(detail::horner_reversed(coeffs, 1.0 / z).value);
}

/// All complex roots of the polynomial with ascending coefficients. Leading
/// zero coefficients are trimmed; trailing zeros contribute roots at 0.
inline std::vector<cplx> polynomial_roots(std::span<const double> input) {
  std::size_t hi = input.size();
  while (hi > 0 && input[hi - 1] == 0.0) --hi;
  if (hi == 0) throw Error(ErrorCode::RootFindingFailed, "zero polynomial has no isolated roots");
  std::size_t lo = 0;
  while (input[lo] == 0.0) ++lo;

  std::vector<cplx> roots(lo, cplx{0.0, 0.0});
  std::vector<double> coeffs(input.begin() + static_cast<std::ptrdiff_t>(lo),
                             input.begin() + static_cast<std::ptrdiff_t>(hi));
  const std::size_t deg = coeffs.size() - 1;
  if (deg == 0) return roots;

  const double lead = coeffs.back();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t k = 1; k < deg; ++k) companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
  for (std::size_t k = 0; k < deg; ++k) {
    companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(deg - 1)) = -coeffs[k] / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);

  std::vector<cplx> z(deg);
  if (solver.info() == Eigen::Success) {
    for (std::size_t k = 0; k < deg; ++k) z[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
  } else {
    // Fall back to the usual Aberth start: points on a circle of the
    // geometric-mean root radius, offset from the real axis.
    const double radius = std::pow(std::abs(coeffs.front() / lead), 1.0 / static_cast<double>(deg));
    for (std::size_t k = 0; k < deg; ++k) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(deg);
      z[k] = std::polar(std::max(radius, 1e-3), angle);
    }
  }

  // Aberth-Ehrlich refinement.
  constexpr int kMaxIterations = 200;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(deg, false);
  for (int it = 0; it < kMaxIterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < deg; ++i) {
      if (done[i]) continue;
      const cplx ratio = detail::newton_ratio(coeffs, z[i]);
      if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) {
        done[i] = true;  // exact root or vanishing derivative
        continue;
      }
      cplx repulsion{0.0, 0.0};
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      if (std::abs(step) <= 4.0 * eps * std::max(1.0, std::abs(z[i]))) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_ROOTS_HPP
