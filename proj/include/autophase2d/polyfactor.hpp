#ifndef AUTOPHASE2D_POLYFACTOR_HPP
#define AUTOPHASE2D_POLYFACTOR_HPP

// Factorization of a 1D autocorrelation through its associated polynomial.
//
// The associated polynomial of r has coefficients r(-(m-1)) .. r(m-1) and its
// 2(m-1) zeros come in reflected pairs (g, 1/conj(g)). A signal with
// autocorrelation r is fixed (up to sign) by picking one member of each pair.
// For real signals the picks are grouped into flip units: a real zero, or a
// complex zero together with its conjugate, which must flip jointly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "autophase2d/core.hpp"
#include "autophase2d/roots.hpp"

namespace autophase2d {

/// Bit k selects the reflected member of unit k.
using FlipMask = std::uint64_t;

/// Ascending coefficients.
struct Polynomial {
  std::vector<double> coeffs;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

struct ZeroPairing {
  /// One representative per reflected pair, |g| >= 1.
  std::vector<cplx> gammas;
  /// |partner - 1/conj(g)| / (1 + |g|) for the partner actually found.
  std::vector<double> pairing_residuals;
  /// Leading coefficient of the associated polynomial, r(m-1).
  double scale = 0.0;
};

struct FlipUnit {
  enum class Kind { RealZero, ConjugatePair };

  Kind kind;
  /// For ConjugatePair the member with positive imaginary part.
  cplx gamma;

  std::size_t multiplicity() const noexcept { return kind == Kind::RealZero ? 1 : 2; }
};

struct FlipUnits {
  std::vector<FlipUnit> units;

  std::size_t size() const noexcept { return units.size(); }

  std::size_t zero_count() const noexcept {
    std::size_t c = 0;
    for (const auto& u : units) c += u.multiplicity();
    return c;
  }

  std::size_t real_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(units.begin(), units.end(), [](const FlipUnit& u) {
      return u.kind == FlipUnit::Kind::RealZero;
    }));
  }
};

struct Candidate {
  Signal1D values;
  FlipMask flips = 0;
  /// max_l |(y * y)(l) - r(l)| / max|r|; NaN until validated against r.
  double autocorr_residual = std::numeric_limits<double>::quiet_NaN();
  /// y[n-1] * y[n^2-n]; NaN when the length is not a perfect square.
  double f_value = std::numeric_limits<double>::quiet_NaN();
};

struct FactorTolerances {
  double tol_root = 1e-8;
  double tol_pair = 1e-6;
  double tol_conj = 1e-8;
};

inline Polynomial associated_polynomial(const Autocorr1D& r) {
  if (std::abs(r.endpoint()) <= 1e-12 * r.max_abs()) {
    throw Error(ErrorCode::ZeroEndpoint, "r(m-1) = x[0] x[m-1] vanishes; the signal does not have full support");
  }
  return Polynomial{std::vector<double>(r.values().begin(), r.values().end())};
}

/// Roots of the palindromic polynomial P, grouped into reflected pairs.
inline ZeroPairing find_zero_pairs(const Polynomial& P, double tol_pair = 1e-6, double tol_root = 1e-8) {
  if (P.coeffs.empty()) throw Error(ErrorCode::DegenerateSize, "empty polynomial");
  if (P.coeffs.size() % 2 == 0) throw Error(ErrorCode::LengthMismatch, "associated polynomial must have even degree");
  const std::size_t pairs = P.degree() / 2;

  ZeroPairing out;
  out.scale = P.coeffs.back();
  if (pairs == 0) return out;

  const double norm = detail::max_abs(P.coeffs);
  std::vector<double> scaled(P.coeffs);
  for (double& c : scaled) c /= norm;

  const std::vector<cplx> roots = polynomial_roots(scaled);
  if (roots.size() != 2 * pairs) {
    throw Error(ErrorCode::RootFindingFailed, "expected " + std::to_string(2 * pairs) + " roots, found " +
                                                  std::to_string(roots.size()));
  }

  std::vector<cplx> outside;
  std::vector<cplx> inside;
  for (const cplx& z : roots) {
    const double res = scaled_residual(scaled, z);
    if (!(res <= tol_root)) {
      throw Error(ErrorCode::RootFindingFailed, "root residual " + std::to_string(res) + " exceeds tolerance");
    }
    const double mod = std::abs(z);
    if (std::abs(mod - 1.0) <= tol_pair) {
      throw Error(ErrorCode::UnitCircleZero, "zero on the unit circle at modulus " + std::to_string(mod));
    }
    (mod > 1.0 ? outside : inside).push_back(z);
  }
  if (outside.size() != pairs) {
    throw Error(ErrorCode::UnitCircleZero, "zeros do not split evenly across the unit circle");
  }

  std::sort(outside.begin(), outside.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  std::vector<bool> used(inside.size(), false);
  for (const cplx& g : outside) {
    const cplx mirror = 1.0 / std::conj(g);
    std::size_t best = inside.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < inside.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(inside[k] - mirror);
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    used[best] = true;
    const double residual = best_dist / (1.0 + std::abs(g));
    if (residual > tol_pair) {
      throw Error(ErrorCode::RootFindingFailed,
                  "reflected partner of a zero is off by " + std::to_string(residual) + " (repeated or clustered roots)");
    }
    // Both members estimate the same zero; average them.
    out.gammas.push_back(0.5 * (g + 1.0 / std::conj(inside[best])));
    out.pairing_residuals.push_back(residual);
  }
  return out;
}

/// Units ordered by |g| descending, then real part, then imaginary part.
inline FlipUnits group_flip_units(const ZeroPairing& zp, double tol_conj = 1e-8) {
  FlipUnits fu;
  std::vector<cplx> upper;
  std::vector<cplx> lower;
  for (const cplx& g : zp.gammas) {
    if (std::abs(g.imag()) <= tol_conj * std::abs(g)) {
      fu.units.push_back({FlipUnit::Kind::RealZero, cplx{g.real(), 0.0}});
    } else {
      (g.imag() > 0.0 ? upper : lower).push_back(g);
    }
  }
  std::vector<bool> used(lower.size(), false);
  for (const cplx& g : upper) {
    std::size_t best = lower.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(lower[k] - std::conj(g));
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (best == lower.size() || best_dist > tol_conj * std::abs(g)) {
      throw Error(ErrorCode::UnpairedComplexZero, "complex zero has no conjugate partner");
    }
    used[best] = true;
    fu.units.push_back({FlipUnit::Kind::ConjugatePair, 0.5 * (g + std::conj(lower[best]))});
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::UnpairedComplexZero, "complex zero has no conjugate partner");
  }
  std::sort(fu.units.begin(), fu.units.end(), [](const FlipUnit& a, const FlipUnit& b) {
    const double ma = std::abs(a.gamma);
    const double mb = std::abs(b.gamma);
    if (ma != mb) return ma > mb;
    if (a.gamma.real() != b.gamma.real()) return a.gamma.real() < b.gamma.real();
    return a.gamma.imag() < b.gamma.imag();
  });
  return fu;
}

inline FlipUnits factor_units(const Autocorr1D& r, const FactorTolerances& tol = {}) {
  return group_flip_units(find_zero_pairs(associated_polynomial(r), tol.tol_pair, tol.tol_root), tol.tol_conj);
}

/// The zero multiset B selected by a flip mask.
inline std::vector<cplx> zero_set(const FlipUnits& fu, FlipMask flips) {
  std::vector<cplx> zeros;
  zeros.reserve(fu.zero_count());
  for (std::size_t k = 0; k < fu.size(); ++k) {
    const FlipUnit& unit = fu.units[k];
    const cplx beta = ((flips >> k) & 1u) ? 1.0 / std::conj(unit.gamma) : unit.gamma;
    zeros.push_back(beta);
    if (unit.kind == FlipUnit::Kind::ConjugatePair) zeros.push_back(std::conj(beta));
  }
  return zeros;
}

namespace detail {

inline void canonicalize_sign(std::vector<double>& v) {
  const double floor = 1e-12 * max_abs(v);
  for (double e : v) {
    if (std::abs(e) > floor) {
      if (e < 0.0) {
        for (double& x : v) x = -x;
      }
      return;
    }
  }
}

}  // namespace detail

/// Expands sqrt(|r_peak| / prod|b|) * prod (z - b) over the selected zero set
/// and returns its coefficients with the first nonzero entry made positive.
/// Residual and f_value are left for the caller, which knows r and n.
inline Candidate reconstruct_candidate(const FlipUnits& fu, FlipMask flips, double r_peak) {
  if (fu.size() < 64 && (flips >> fu.size()) != 0) {
    throw Error(ErrorCode::InvalidConfig, "flip mask has bits beyond the unit count");
  }
  if (r_peak == 0.0) throw Error(ErrorCode::ZeroEndpoint, "r(m-1) must be nonzero");

  const std::vector<cplx> zeros = zero_set(fu, flips);
  std::vector<cplx> poly{cplx{1.0, 0.0}};
  double modulus_product = 1.0;
  for (const cplx& b : zeros) {
    poly.push_back(cplx{0.0, 0.0});
    for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] = poly[k - 1] - b * poly[k];
    poly[0] = -b * poly[0];
    modulus_product *= std::abs(b);
  }
  const double amplitude = std::sqrt(std::abs(r_peak) / modulus_product);

  std::vector<double> values(poly.size());
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const cplx c = amplitude * poly[k];
    values[k] = c.real();
    max_re = std::max(max_re, std::abs(c.real()));
    max_im = std::max(max_im, std::abs(c.imag()));
  }
  if (max_im > 1e-8 * max_re) {
    throw Error(ErrorCode::NonRealCoefficients, "flip pattern produced complex coefficients");
  }
  detail::canonicalize_sign(values);
  return Candidate{Signal1D(std::move(values)), flips};
}

/// max_l |(y * y)(l) - r(l)| / max|r|
inline double autocorr_residual(const Signal1D& y, const Autocorr1D& r) {
  if (y.size() != r.m()) throw Error(ErrorCode::LengthMismatch, "candidate length differs from signal length");
  const Autocorr1D yy = autocorr_1d(y);
  double worst = 0.0;
  for (std::size_t k = 0; k < yy.values().size(); ++k) {
    worst = std::max(worst, std::abs(yy.values()[k] - r.values()[k]));
  }
  const double scale = r.max_abs();
  return scale > 0.0 ? worst / scale : worst;
}

/// e_k of the multiset, e_0 = 1.
inline cplx elementary_symmetric(std::span<const cplx> values, std::size_t k) {
  if (k > values.size()) throw Error(ErrorCode::InvalidConfig, "k exceeds the number of values");
  std::vector<cplx> e(k + 1, cplx{0.0, 0.0});
  e[0] = 1.0;
  for (const cplx& v : values) {
    for (std::size_t j = k; j > 0; --j) e[j] += v * e[j - 1];
  }
  return e[k];
}

/// y[n-1] * y[n^2-n], the quantity pinned by R(n-1, -(n-1)).
inline double f_direct(std::span<const double> y, std::size_t n) {
  if (n == 0 || y.size() != n * n) throw Error(ErrorCode::LengthMismatch, "f_direct needs a length-n^2 vector");
  return y[n - 1] * y[n * n - n];
}

inline double f_direct(const Signal1D& y, std::size_t n) { return f_direct(y.values(), n); }

/// |r_peak| e_{n-1}(B) e_{n-1}(1/conj(B)), the same product expressed through
/// the zero set. Agrees with f_direct of the reconstructed signal in magnitude.
inline double f_vieta(const FlipUnits& fu, FlipMask flips, double r_peak, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::DegenerateSize, "n must be positive");
  const std::vector<cplx> zeros = zero_set(fu, flips);
  if (n - 1 > zeros.size()) throw Error(ErrorCode::LengthMismatch, "zero set is shorter than n-1");

  std::vector<cplx> reflected(zeros.size());
  std::vector<cplx> moduli(zeros.size());
  std::vector<cplx> inv_moduli(zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    reflected[k] = 1.0 / std::conj(zeros[k]);
    moduli[k] = std::abs(zeros[k]);
    inv_moduli[k] = 1.0 / std::abs(zeros[k]);
  }
  const cplx value = std::abs(r_peak) * elementary_symmetric(zeros, n - 1) * elementary_symmetric(reflected, n - 1);
  // e_k of the moduli bounds the magnitude of every term in the sums.
  const double bound = std::abs(r_peak) * elementary_symmetric(moduli, n - 1).real() *
                       elementary_symmetric(inv_moduli, n - 1).real();
  if (std::abs(value.imag()) > 1e-8 * bound) {
    throw Error(ErrorCode::NonRealResult, "Vieta product has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_POLYFACTOR_HPP
