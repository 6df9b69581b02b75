#ifndef AUTOPHASE2D_CORE_HPP
#define AUTOPHASE2D_CORE_HPP

// Signal types, row-wise vectorization, 1D/2D autocorrelation, the Fourier
// magnitude front end and the trivial-ambiguity equivalence tests.
//
// Storage conventions:
//   Autocorr1D  lag l in [-(m-1), m-1]        -> index l + (m-1)
//   Autocorr2D  lag (i,j) in [-(n-1), n-1]^2  -> row i + (n-1), col j + (n-1)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "autophase2d/error.hpp"

namespace autophase2d {

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, std::string(what) + " contains a non-finite value");
    }
  }
}

inline double max_abs(std::span<const double> values) noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

/// Real N x N matrix stored row-major.
class Matrix2D {
 public:
  Matrix2D(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (n_ == 0) throw Error(ErrorCode::DegenerateSize, "matrix side must be positive");
    if (values_.size() != n_ * n_) {
      throw Error(ErrorCode::LengthMismatch, "matrix of side " + std::to_string(n_) + " needs " +
                                                 std::to_string(n_ * n_) + " values, got " +
                                                 std::to_string(values_.size()));
    }
    detail::require_finite(values_, "matrix");
  }

  static Matrix2D from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> values;
    values.reserve(n * n);
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(ErrorCode::LengthMismatch, "matrix rows must be square");
      values.insert(values.end(), row.begin(), row.end());
    }
    return Matrix2D(n, std::move(values));
  }

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return values_[row * n_ + col]; }
  std::span<const double> values() const noexcept { return values_; }

  Matrix2D negated() const {
    std::vector<double> v(values_);
    for (double& e : v) e = -e;
    return Matrix2D(n_, std::move(v));
  }

  Matrix2D rotated180() const { return Matrix2D(n_, std::vector<double>(values_.rbegin(), values_.rend())); }

  friend bool operator==(const Matrix2D&, const Matrix2D&) = default;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Real 1D signal.
class Signal1D {
 public:
  explicit Signal1D(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::DegenerateSize, "signal must be non-empty");
    detail::require_finite(values_, "signal");
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }

  Signal1D negated() const {
    std::vector<double> v(values_);
    for (double& e : v) e = -e;
    return Signal1D(std::move(v));
  }

  Signal1D reversed() const { return Signal1D(std::vector<double>(values_.rbegin(), values_.rend())); }

  friend bool operator==(const Signal1D&, const Signal1D&) = default;

 private:
  std::vector<double> values_;
};

/// Symmetric autocorrelation of a length-m signal, lags -(m-1)..(m-1).
class Autocorr1D {
 public:
  /// Values in offset layout. Asymmetry up to 1e-8 * max|value| is averaged
  /// away; anything larger is rejected.
  Autocorr1D(std::size_t m, std::vector<double> values) : m_(m), values_(std::move(values)) {
    if (m_ == 0) throw Error(ErrorCode::DegenerateSize, "autocorrelation length must be positive");
    if (values_.size() != 2 * m_ - 1) {
      throw Error(ErrorCode::LengthMismatch, "1D autocorrelation of a length-" + std::to_string(m_) +
                                                 " signal needs " + std::to_string(2 * m_ - 1) + " values");
    }
    detail::require_finite(values_, "1D autocorrelation");
    const double scale = detail::max_abs(values_);
    const std::size_t last = values_.size() - 1;
    for (std::size_t k = 0; k < m_ - 1; ++k) {
      const double a = values_[k];
      const double b = values_[last - k];
      if (a == b) continue;
      if (std::abs(a - b) > 1e-8 * scale) {
        throw Error(ErrorCode::AsymmetricInput, "1D autocorrelation is not symmetric at lag " +
                                                    std::to_string(m_ - 1 - k));
      }
      values_[k] = values_[last - k] = 0.5 * (a + b);
    }
  }

  /// Builds from the nonnegative lags [r(0), r(1), ..., r(m-1)].
  static Autocorr1D from_nonnegative(std::span<const double> half) {
    const std::size_t m = half.size();
    if (m == 0) throw Error(ErrorCode::DegenerateSize, "autocorrelation length must be positive");
    std::vector<double> v(2 * m - 1);
    for (std::size_t l = 0; l < m; ++l) v[m - 1 + l] = v[m - 1 - l] = half[l];
    return Autocorr1D(m, std::move(v));
  }

  std::size_t m() const noexcept { return m_; }
  double lag(std::ptrdiff_t l) const noexcept { return values_[static_cast<std::size_t>(l + static_cast<std::ptrdiff_t>(m_) - 1)]; }
  /// r(m-1) = x[0] x[m-1], the leading coefficient of the associated polynomial.
  double endpoint() const noexcept { return values_.back(); }
  double max_abs() const noexcept { return detail::max_abs(values_); }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> nonnegative_lags() const { return {values_.begin() + static_cast<std::ptrdiff_t>(m_ - 1), values_.end()}; }

 private:
  std::size_t m_;
  std::vector<double> values_;
};

/// 2D autocorrelation of an n x n matrix, lags (i,j) in [-(n-1), n-1]^2.
class Autocorr2D {
 public:
  Autocorr2D(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (n_ == 0) throw Error(ErrorCode::DegenerateSize, "autocorrelation side must be positive");
    if (values_.size() != side() * side()) {
      throw Error(ErrorCode::LengthMismatch, "2D autocorrelation of side " + std::to_string(n_) + " needs " +
                                                 std::to_string(side() * side()) + " values");
    }
    detail::require_finite(values_, "2D autocorrelation");
  }

  static Autocorr2D from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t side = rows.size();
    if (side % 2 == 0) throw Error(ErrorCode::LengthMismatch, "2D autocorrelation must have odd side 2n-1");
    std::vector<double> values;
    values.reserve(side * side);
    for (const auto& row : rows) {
      if (row.size() != side) throw Error(ErrorCode::LengthMismatch, "2D autocorrelation rows must be square");
      values.insert(values.end(), row.begin(), row.end());
    }
    return Autocorr2D((side + 1) / 2, std::move(values));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t side() const noexcept { return 2 * n_ - 1; }

  double at(std::ptrdiff_t i, std::ptrdiff_t j) const noexcept {
    const auto off = static_cast<std::ptrdiff_t>(n_) - 1;
    return values_[static_cast<std::size_t>((i + off) * static_cast<std::ptrdiff_t>(side()) + (j + off))];
  }

  std::span<const double> values() const noexcept { return values_; }
  double max_abs() const noexcept { return detail::max_abs(values_); }

  /// max |R(i,j) - R(-i,-j)|
  double asymmetry() const noexcept {
    double worst = 0.0;
    const std::size_t total = values_.size();
    for (std::size_t k = 0; k < total; ++k) worst = std::max(worst, std::abs(values_[k] - values_[total - 1 - k]));
    return worst;
  }

  Autocorr2D symmetrized() const {
    std::vector<double> v(values_);
    const std::size_t total = v.size();
    for (std::size_t k = 0; k < total; ++k) v[k] = 0.5 * (values_[k] + values_[total - 1 - k]);
    return Autocorr2D(n_, std::move(v));
  }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(side());
    for (std::size_t r = 0; r < side(); ++r) {
      out[r].assign(values_.begin() + static_cast<std::ptrdiff_t>(r * side()),
                    values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * side()));
    }
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Squared magnitudes of an m x m 2D DFT of an n x n signal.
class MagnitudeGrid {
 public:
  MagnitudeGrid(std::size_t n, std::size_t m, std::vector<double> values)
      : n_(n), m_(m), values_(std::move(values)) {
    if (n_ == 0) throw Error(ErrorCode::DegenerateSize, "signal side must be positive");
    if (m_ < 2 * n_ - 1) {
      throw Error(ErrorCode::InvalidOversampling, "DFT size " + std::to_string(m_) + " is below 2n-1 = " +
                                                      std::to_string(2 * n_ - 1));
    }
    if (values_.size() != m_ * m_) throw Error(ErrorCode::LengthMismatch, "magnitude grid must hold m*m values");
    detail::require_finite(values_, "magnitude grid");
    for (double v : values_) {
      if (v < 0.0) throw Error(ErrorCode::NotAnAutocorrelation, "squared magnitudes must be nonnegative");
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  double operator()(std::size_t k, std::size_t l) const noexcept { return values_[k * m_ + l]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<double> values_;
};

/// x[r*n + c] = X(r, c)
inline Signal1D vectorize_rowwise(const Matrix2D& X) {
  return Signal1D(std::vector<double>(X.values().begin(), X.values().end()));
}

inline Matrix2D reshape_rowwise(const Signal1D& x, std::size_t n) {
  if (x.size() != n * n) {
    throw Error(ErrorCode::LengthMismatch, "cannot reshape a length-" + std::to_string(x.size()) +
                                               " vector into a " + std::to_string(n) + "x" + std::to_string(n) +
                                               " matrix");
  }
  return Matrix2D(n, std::vector<double>(x.values().begin(), x.values().end()));
}

inline Autocorr1D autocorr_1d(std::span<const double> x) {
  const std::size_t m = x.size();
  if (m == 0) throw Error(ErrorCode::DegenerateSize, "signal must be non-empty");
  std::vector<double> v(2 * m - 1, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    double s = 0.0;
    for (std::size_t i = 0; i + l < m; ++i) s += x[i] * x[i + l];
    v[m - 1 + l] = s;
    v[m - 1 - l] = s;
  }
  return Autocorr1D(m, std::move(v));
}

inline Autocorr1D autocorr_1d(const Signal1D& x) { return autocorr_1d(x.values()); }

inline Autocorr2D autocorr_2d(const Matrix2D& X) {
  const auto n = static_cast<std::ptrdiff_t>(X.n());
  const auto side = 2 * n - 1;
  std::vector<double> v(static_cast<std::size_t>(side * side), 0.0);
  auto slot = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> double& {
    return v[static_cast<std::size_t>((i + n - 1) * side + (j + n - 1))];
  };
  // i >= 0 half, including j < 0 for i > 0 and j >= 0 for i = 0; the rest
  // follows from R(-i,-j) = R(i,j).
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = (i == 0 ? 0 : -(n - 1)); j < n; ++j) {
      double s = 0.0;
      for (std::ptrdiff_t r = 0; r + i < n; ++r) {
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, -j); c < n && c + j < n; ++c) {
          s += X(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) *
               X(static_cast<std::size_t>(r + i), static_cast<std::size_t>(c + j));
        }
      }
      slot(i, j) = s;
      slot(-i, -j) = s;
    }
  }
  return Autocorr2D(X.n(), std::move(v));
}

/// |DFT_{m x m}(X)|^2 by direct summation, with the e^{-j 2 pi / m} kernel.
inline MagnitudeGrid forward_magnitude(const Matrix2D& X, std::size_t m) {
  const std::size_t n = X.n();
  if (m < 2 * n - 1) {
    throw Error(ErrorCode::InvalidOversampling, "DFT size must be at least 2n-1");
  }
  const double w = -2.0 * std::numbers::pi / static_cast<double>(m);
  std::vector<double> out(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          const double phase = w * static_cast<double>((a * k + b * l) % m);
          acc += X(a, b) * std::polar(1.0, phase);
        }
      }
      out[k * m + l] = std::norm(acc);
    }
  }
  return MagnitudeGrid(n, m, std::move(out));
}

/// Inverts |DFT|^2 back to the 2D autocorrelation by a direct inverse DFT
/// folded onto lags [-(n-1), n-1]^2.
inline Autocorr2D measurements_to_autocorr_2d(const MagnitudeGrid& Y) {
  const auto n = static_cast<std::ptrdiff_t>(Y.n());
  const auto m = static_cast<std::ptrdiff_t>(Y.m());
  const auto side = 2 * n - 1;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(m);
  const double norm = 1.0 / static_cast<double>(m * m);

  std::vector<double> re(static_cast<std::size_t>(side * side));
  double max_imag = 0.0;
  for (std::ptrdiff_t i = -(n - 1); i < n; ++i) {
    const std::ptrdiff_t a = ((i % m) + m) % m;
    for (std::ptrdiff_t j = -(n - 1); j < n; ++j) {
      const std::ptrdiff_t b = ((j % m) + m) % m;
      std::complex<double> acc{0.0, 0.0};
      for (std::ptrdiff_t k = 0; k < m; ++k) {
        for (std::ptrdiff_t l = 0; l < m; ++l) {
          const double phase = w * static_cast<double>((a * k + b * l) % m);
          acc += Y(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) * std::polar(1.0, phase);
        }
      }
      acc *= norm;
      re[static_cast<std::size_t>((i + n - 1) * side + (j + n - 1))] = acc.real();
      max_imag = std::max(max_imag, std::abs(acc.imag()));
    }
  }

  Autocorr2D raw(Y.n(), std::move(re));
  const double tol = 1e-8 * std::max(raw.max_abs(), 1e-300);
  if (max_imag > tol) {
    throw Error(ErrorCode::NotAnAutocorrelation, "inverse DFT has imaginary residue " + std::to_string(max_imag));
  }
  if (raw.asymmetry() > tol) {
    throw Error(ErrorCode::NotAnAutocorrelation, "inverse DFT is not point-symmetric");
  }
  return raw.symmetrized();
}

namespace detail {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b, double sign, bool reverse) {
  double worst = 0.0;
  const std::size_t len = a.size();
  for (std::size_t k = 0; k < len; ++k) {
    const double other = reverse ? b[len - 1 - k] : b[k];
    worst = std::max(worst, std::abs(a[k] - sign * other));
  }
  return worst;
}

inline bool equivalent_up_to_sign_and_reversal(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "equivalence test needs equal sizes");
  for (bool reverse : {false, true}) {
    for (double sign : {1.0, -1.0}) {
      if (max_abs_diff(a, b, sign, reverse) <= tol) return true;
    }
  }
  return false;
}

}  // namespace detail

/// True iff y is within tol (max abs entrywise) of x, -x, reverse(x) or -reverse(x).
inline bool trivially_equivalent_1d(const Signal1D& x, const Signal1D& y, double tol) {
  return detail::equivalent_up_to_sign_and_reversal(x.values(), y.values(), tol);
}

/// True iff Z is within tol of X, -X, rot180(X) or -rot180(X). For row-major
/// storage rot180 is exactly the reversal of the value array.
inline bool trivially_equivalent_2d(const Matrix2D& X, const Matrix2D& Z, double tol) {
  return detail::equivalent_up_to_sign_and_reversal(X.values(), Z.values(), tol);
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_CORE_HPP
