#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "autophase2d/core.hpp"
#include "autophase2d/random.hpp"

using namespace autophase2d;

namespace {

const Matrix2D kExampleX = Matrix2D::from_rows({{-24, 26}, {-9, 1}});

// Autocorrelation by accumulating every pairwise product into its lag slot,
// independent of the bounded-sum loops in autocorr_2d.
std::vector<double> brute_autocorr_2d(const Matrix2D& X) {
  const auto n = static_cast<long>(X.n());
  const long side = 2 * n - 1;
  std::vector<double> R(static_cast<std::size_t>(side * side), 0.0);
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b)
      for (long c = 0; c < n; ++c)
        for (long d = 0; d < n; ++d)
          R[static_cast<std::size_t>((c - a + n - 1) * side + (d - b + n - 1))] += X(a, b) * X(c, d);
  return R;
}

std::vector<double> brute_autocorr_1d(const std::vector<double>& x) {
  const auto m = static_cast<long>(x.size());
  std::vector<double> r(static_cast<std::size_t>(2 * m - 1), 0.0);
  for (long a = 0; a < m; ++a)
    for (long b = 0; b < m; ++b) r[static_cast<std::size_t>(b - a + m - 1)] += x[a] * x[b];
  return r;
}

// |DFT|^2 with the textbook double sum over complex exponentials.
MagnitudeGrid reference_magnitude(const Matrix2D& X, std::size_t m) {
  std::vector<double> out(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      std::complex<double> acc = 0.0;
      for (std::size_t a = 0; a < X.n(); ++a)
        for (std::size_t b = 0; b < X.n(); ++b)
          acc += X(a, b) * std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * double(a * k + b * l) / double(m)));
      out[k * m + l] = std::norm(acc);
    }
  }
  return MagnitudeGrid(X.n(), m, out);
}

}  // namespace

TEST(Vectorize, RowWise) {
  EXPECT_EQ(vectorize_rowwise(kExampleX), Signal1D({-24, 26, -9, 1}));
  EXPECT_EQ(vectorize_rowwise(Matrix2D(1, {3.5})), Signal1D({3.5}));
  EXPECT_EQ(vectorize_rowwise(Matrix2D::from_rows({{1, 0}, {0, 1}})), Signal1D({1, 0, 0, 1}));
}

TEST(Reshape, InverseOfVectorize) {
  EXPECT_EQ(reshape_rowwise(Signal1D({-24, 26, -9, 1}), 2), kExampleX);
  GaussianSource g(3);
  for (std::size_t n = 1; n <= 4; ++n) {
    const Matrix2D X = g.matrix(n);
    EXPECT_EQ(reshape_rowwise(vectorize_rowwise(X), n), X);
  }
}

TEST(Reshape, LengthMismatch) {
  try {
    reshape_rowwise(Signal1D({1, 2, 3}), 2);
    FAIL() << "expected LengthMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(Matrix2D, RejectsBadInput) {
  EXPECT_THROW(Matrix2D(2, {1, 2, 3}), Error);
  EXPECT_THROW(Matrix2D(1, {std::nan("")}), Error);
  EXPECT_THROW(Matrix2D::from_rows({{1, 2}, {3}}), Error);
}

TEST(Autocorr1D, WorkedVector) {
  const Autocorr1D r = autocorr_1d(Signal1D({-24, 26, -9, 1}));
  const std::vector<double> expected{-24, 242, -867, 1334, -867, 242, -24};
  EXPECT_EQ(std::vector<double>(r.values().begin(), r.values().end()), expected);
  EXPECT_EQ(r.endpoint(), -24);
}

TEST(Autocorr1D, SmallCases) {
  const Autocorr1D delta = autocorr_1d(Signal1D({1, 0, 0}));
  for (std::ptrdiff_t l = -2; l <= 2; ++l) EXPECT_EQ(delta.lag(l), l == 0 ? 1.0 : 0.0);
  const Autocorr1D ones = autocorr_1d(Signal1D({1, 1}));
  EXPECT_EQ(std::vector<double>(ones.values().begin(), ones.values().end()), (std::vector<double>{1, 2, 1}));
}

TEST(Autocorr1D, RejectsAsymmetry) {
  EXPECT_THROW(Autocorr1D(2, {1, 2, 3}), Error);
  // Round-off level asymmetry is averaged away.
  const Autocorr1D r(2, {1.0, 2.0, 1.0 + 1e-12});
  EXPECT_EQ(r.lag(-1), r.lag(1));
}

TEST(Autocorr1D, PropertiesAgainstBruteForce) {
  GaussianSource g(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(1 + trial % 9);
    for (double& v : x) v = g.next();
    const Autocorr1D r = autocorr_1d(x);
    const auto ref = brute_autocorr_1d(x);
    double energy = 0.0;
    for (double v : x) energy += v * v;
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(r.values()[k], ref[k], 1e-12);
    EXPECT_NEAR(r.lag(0), energy, 1e-12);
    EXPECT_GE(r.lag(0), 0.0);
    EXPECT_EQ(r.endpoint(), x.front() * x.back());
  }
}

TEST(Autocorr2D, WorkedMatrix) {
  const Autocorr2D R = autocorr_2d(kExampleX);
  const std::vector<double> expected{-24, 242, -234, -633, 1334, -633, -234, 242, -24};
  EXPECT_EQ(std::vector<double>(R.values().begin(), R.values().end()), expected);
  EXPECT_EQ(R.at(1, -1), -234);
  EXPECT_EQ(R.at(0, 1), -633);
}

TEST(Autocorr2D, DeltaAndScalar) {
  const Autocorr2D D = autocorr_2d(Matrix2D::from_rows({{1, 0}, {0, 0}}));
  for (std::ptrdiff_t i = -1; i <= 1; ++i)
    for (std::ptrdiff_t j = -1; j <= 1; ++j) EXPECT_EQ(D.at(i, j), (i == 0 && j == 0) ? 1.0 : 0.0);
  const Autocorr2D S = autocorr_2d(Matrix2D(1, {-3}));
  EXPECT_EQ(S.at(0, 0), 9);
}

TEST(Autocorr2D, ExactSymmetryAndBruteForce) {
  GaussianSource g(5);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix2D X = g.matrix(n);
      const Autocorr2D R = autocorr_2d(X);
      EXPECT_EQ(R.asymmetry(), 0.0);
      const auto ref = brute_autocorr_2d(X);
      for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(R.values()[k], ref[k], 1e-12);
    }
  }
}

TEST(Measurements, AllOnesIsDelta) {
  const Autocorr2D R = measurements_to_autocorr_2d(MagnitudeGrid(2, 3, std::vector<double>(9, 1.0)));
  for (std::ptrdiff_t i = -1; i <= 1; ++i)
    for (std::ptrdiff_t j = -1; j <= 1; ++j) EXPECT_NEAR(R.at(i, j), (i == 0 && j == 0) ? 1.0 : 0.0, 1e-14);
}

TEST(Measurements, WorkedMatrixRoundTrip) {
  const Autocorr2D R = measurements_to_autocorr_2d(reference_magnitude(kExampleX, 3));
  const Autocorr2D expected = autocorr_2d(kExampleX);
  for (std::size_t k = 0; k < expected.values().size(); ++k) {
    EXPECT_NEAR(R.values()[k], expected.values()[k], 1e-9 * 1334);
  }
}

TEST(Measurements, RandomRoundTripAcrossOversampling) {
  GaussianSource g(17);
  for (std::size_t n = 1; n <= 4; ++n) {
    const Matrix2D X = g.matrix(n);
    const Autocorr2D expected = autocorr_2d(X);
    for (std::size_t m = 2 * n - 1; m <= 2 * n + 2; ++m) {
      const MagnitudeGrid Y = forward_magnitude(X, m);
      const MagnitudeGrid Yref = reference_magnitude(X, m);
      for (std::size_t k = 0; k < Y.values().size(); ++k) EXPECT_NEAR(Y.values()[k], Yref.values()[k], 1e-10);
      const Autocorr2D R = measurements_to_autocorr_2d(Y);
      EXPECT_EQ(R.asymmetry(), 0.0);
      for (std::size_t k = 0; k < expected.values().size(); ++k) {
        EXPECT_NEAR(R.values()[k], expected.values()[k], 1e-9 * expected.max_abs());
      }
    }
  }
}

TEST(Measurements, InvalidOversampling) {
  try {
    MagnitudeGrid(2, 2, std::vector<double>(4, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidOversampling);
  }
}

TEST(Measurements, NotAnAutocorrelation) {
  // A single nonzero bin gives a complex inverse DFT.
  std::vector<double> v(9, 0.0);
  v[1] = 1.0;
  try {
    measurements_to_autocorr_2d(MagnitudeGrid(2, 3, v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnAutocorrelation);
  }
}

TEST(Equivalence1D, WorkedExamples) {
  const Signal1D x({-24, 26, -9, 1});
  EXPECT_TRUE(trivially_equivalent_1d(x, Signal1D({-1, 9, -26, 24}), 1e-9));
  EXPECT_TRUE(trivially_equivalent_1d(x, x.negated(), 0.0));
  EXPECT_FALSE(trivially_equivalent_1d(x, Signal1D({-6, 29, -21, 4}), 1e-6));
}

TEST(Equivalence2D, ClassMembers) {
  EXPECT_TRUE(trivially_equivalent_2d(kExampleX, kExampleX.rotated180(), 0.0));
  EXPECT_TRUE(trivially_equivalent_2d(kExampleX, kExampleX.negated(), 0.0));
  // Second row of the candidate table reshaped: same autocorrelation in 1D, different matrix.
  EXPECT_FALSE(trivially_equivalent_2d(kExampleX, Matrix2D::from_rows({{-6, 29}, {-21, 4}}), 1e-6));
}

TEST(Equivalence, ReflexiveSymmetricAndAtMostFourMembers) {
  GaussianSource g(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix2D X = g.matrix(3);
    const Matrix2D Z = g.matrix(3);
    EXPECT_TRUE(trivially_equivalent_2d(X, X, 0.0));
    EXPECT_EQ(trivially_equivalent_2d(X, Z, 1e-9), trivially_equivalent_2d(Z, X, 1e-9));
    const std::vector<Matrix2D> members{X, X.negated(), X.rotated180(), X.rotated180().negated()};
    for (const auto& a : members) {
      EXPECT_TRUE(trivially_equivalent_2d(X, a, 0.0));
      for (const auto& b : members) EXPECT_TRUE(trivially_equivalent_2d(a, b, 0.0));
    }
    const Signal1D x = vectorize_rowwise(X);
    EXPECT_TRUE(trivially_equivalent_1d(x, x.reversed().negated(), 0.0));
  }
}

TEST(Equivalence, LengthMismatchThrows) {
  EXPECT_THROW(trivially_equivalent_1d(Signal1D({1, 2}), Signal1D({1, 2, 3}), 1.0), Error);
}
