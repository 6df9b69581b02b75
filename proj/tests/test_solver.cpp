#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "autophase2d/random.hpp"
#include "autophase2d/solver.hpp"

using namespace autophase2d;

namespace {

const Matrix2D kExampleX = Matrix2D::from_rows({{-24, 26}, {-9, 1}});
const Autocorr1D kExampleR = Autocorr1D::from_nonnegative(std::vector<double>{1334, -867, 242, -24});

Autocorr2D delta_r(std::size_t n) {
  std::vector<double> v((2 * n - 1) * (2 * n - 1), 0.0);
  v[v.size() / 2] = 1.0;
  return Autocorr2D(n, v);
}

}  // namespace

TEST(Enumerate, WorkedExample) {
  const Enumeration e = enumerate(kExampleR);
  EXPECT_EQ(e.units.size(), 3u);
  EXPECT_EQ(e.support, 4u);
  ASSERT_EQ(e.candidates.size(), 4u);
  const std::vector<std::vector<double>> table{{-24, 26, -9, 1}, {-6, 29, -21, 4}, {-12, 31, -15, 2}, {-8, 30, -19, 3}};
  for (const auto& row : table) {
    const auto hits = std::count_if(e.candidates.begin(), e.candidates.end(), [&](const Candidate& c) {
      return trivially_equivalent_1d(c.values, Signal1D(row), 1e-9);
    });
    EXPECT_EQ(hits, 1) << "row starting " << row[0];
  }
  for (const Candidate& c : e.candidates) {
    EXPECT_LE(c.autocorr_residual, 1e-12);
    EXPECT_EQ(c.flips & 1u, 0u);
  }
}

TEST(Enumerate, DeltaHasOneCandidate) {
  const Enumeration e = enumerate(reduce_2d_to_1d(delta_r(3)));
  EXPECT_EQ(e.support, 1u);
  ASSERT_EQ(e.candidates.size(), 1u);
  const Signal1D expected({1, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_TRUE(trivially_equivalent_1d(e.candidates[0].values, expected, 1e-12));
}

TEST(Enumerate, SeededN3CountsAndPairwiseDistinct) {
  GaussianSource g(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Autocorr1D r = autocorr_1d(vectorize_rowwise(g.matrix(3)));
    const Enumeration e = enumerate(r);
    ASSERT_EQ(e.candidates.size(), std::size_t{1} << (e.units.size() - 1));
    EXPECT_EQ(e.units.zero_count(), 8u);
    for (std::size_t a = 0; a < e.candidates.size(); ++a) {
      EXPECT_LE(e.candidates[a].autocorr_residual, 1e-6);
      for (std::size_t b = a + 1; b < e.candidates.size(); ++b) {
        EXPECT_FALSE(trivially_equivalent_1d(e.candidates[a].values, e.candidates[b].values, 1e-6));
      }
    }
  }
}

TEST(Enumerate, DeterministicAcrossThreadCounts) {
  const Autocorr1D r = autocorr_1d(vectorize_rowwise(GaussianSource(1234).matrix(4)));
  SolveOptions serial;
  serial.threads = 1;
  SolveOptions wide;
  wide.threads = 8;
  const Enumeration a = enumerate(r, serial);
  const Enumeration b = enumerate(r, wide);
  ASSERT_EQ(a.candidates.size(), b.candidates.size());
  for (std::size_t k = 0; k < a.candidates.size(); ++k) {
    EXPECT_EQ(a.candidates[k].flips, b.candidates[k].flips);
    EXPECT_EQ(a.candidates[k].values, b.candidates[k].values);
  }
}

TEST(Filter, KeyConstraint) {
  const auto cands = enumerate_candidates(kExampleR);
  const auto kept = filter_by_constraint(cands, -234, 2, 1e-6);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_TRUE(trivially_equivalent_1d(kept[0].values, vectorize_rowwise(kExampleX), 1e-9));
  EXPECT_TRUE(filter_by_constraint(cands, 0.0, 2, 1e-6).empty());
  EXPECT_EQ(filter_by_constraint(cands, 0.0, 2, std::numeric_limits<double>::infinity()).size(), cands.size());
}

TEST(Solve, WorkedExample) {
  const SolveReport rep = solve_2d(autocorr_2d(kExampleX));
  EXPECT_EQ(rep.n, 2u);
  EXPECT_EQ(rep.candidates_total, 4u);
  EXPECT_EQ(rep.key_constraint_value, -234);
  ASSERT_TRUE(rep.solution);
  EXPECT_TRUE(rep.unique);
  EXPECT_TRUE(rep.verified);
  EXPECT_TRUE(trivially_equivalent_2d(*rep.solution, kExampleX, 1e-9));
  EXPECT_LE(rep.solution_residual_2d, 1e-12);
}

TEST(Solve, FromMagnitudes) {
  const SolveReport rep = solve_2d(forward_magnitude(kExampleX, 3));
  ASSERT_TRUE(rep.solution);
  EXPECT_TRUE(trivially_equivalent_2d(*rep.solution, kExampleX, 1e-8));
}

TEST(Solve, Delta) {
  const SolveReport rep = solve_2d(delta_r(3));
  ASSERT_TRUE(rep.solution);
  EXPECT_TRUE(rep.unique);
  EXPECT_TRUE(trivially_equivalent_2d(*rep.solution, Matrix2D::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}), 1e-12));
}

TEST(Solve, ScalarN1) {
  const SolveReport rep = solve_2d(Autocorr2D(1, {9.0}));
  ASSERT_TRUE(rep.solution);
  EXPECT_NEAR(std::abs((*rep.solution)(0, 0)), 3.0, 1e-12);
}

TEST(Solve, GaussianN3) {
  GaussianSource g(2);
  int recovered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix2D X = g.matrix(3);
    const SolveReport rep = solve_2d(autocorr_2d(X));
    if (rep.unique && rep.solution && trivially_equivalent_2d(*rep.solution, X, 1e-6)) ++recovered;
  }
  EXPECT_GE(recovered, 198);
}

TEST(Solve, AsymmetricInputRejected) {
  EXPECT_THROW(solve_2d(Autocorr2D(2, {-24, 242, -234, -633, 1334, -633, -234, 242, -20})), Error);
}

TEST(Census, WorkedExample) {
  const CensusData c = ambiguity_census(kExampleR, 2);
  ASSERT_EQ(c.d.size(), 4u);
  EXPECT_EQ(c.candidate_count, 4u);
  EXPECT_EQ(c.all_real_count, 4u);
  EXPECT_NEAR(c.c1, -1.0 / 609.0, 1e-15);
  const std::vector<double> raw{-609, -570, -465, -234};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(c.d[k], raw[3 - k] / -609.0, 1e-12);
  EXPECT_EQ(c.d.back(), 1.0);
  ASSERT_EQ(c.v.size(), 3u);
  EXPECT_NEAR(c.v[0], std::log((465.0 - 234.0) / 609.0), 1e-10);
}

TEST(Census, SeededN3StrictlyIncreasing) {
  const Autocorr1D r = reduce_2d_to_1d(autocorr_2d(GaussianSource(42).matrix(3)));
  const CensusData c = ambiguity_census(r, 3);
  EXPECT_EQ(c.d.size(), c.candidate_count);
  EXPECT_EQ(c.all_real_count, 128u);
  EXPECT_EQ(c.d.back(), 1.0);
  for (std::size_t k = 0; k + 1 < c.d.size(); ++k) {
    EXPECT_LT(c.d[k], c.d[k + 1]);
    EXPECT_TRUE(std::isfinite(c.v[k]));
  }
}

TEST(Census, RepeatedZeroGivesCollapsedGap) {
  // y = (z - 2)^2 (z - 3): flipping either copy of the double zero gives the
  // same signal, so two census entries coincide.
  const CensusData c = ambiguity_census(autocorr_1d(Signal1D({-12, 16, -7, 1})), 2);
  ASSERT_EQ(c.d.size(), 4u);
  const double smallest = *std::min_element(c.v.begin(), c.v.end());
  EXPECT_LT(smallest, std::log(1e-6));
}

TEST(Census, LengthMismatch) { EXPECT_THROW(ambiguity_census(autocorr_1d(Signal1D({1, 2, 3})), 2), Error); }

TEST(Probe, LimitsAtModerateAlpha) {
  const ProbeResult p2 = appendix_probe(2, 1e3);
  EXPECT_EQ(p2.predicted, 1.0);
  EXPECT_NEAR(p2.diff_norm, 1.0, 1e-2);
  const ProbeResult p3 = appendix_probe(3, 1e3);
  EXPECT_EQ(p3.k1, 28.0);
  EXPECT_EQ(p3.k2, 7.0);
  EXPECT_EQ(p3.k3, 1.0);
  EXPECT_EQ(p3.predicted, 21.0);
  EXPECT_NEAR(p3.diff_norm, 21.0, 0.21);
  // The individual terms carry 1/alpha corrections; only their difference
  // converges faster.
  const ProbeResult q3 = appendix_probe(3, 1e4);
  EXPECT_NEAR(q3.f1_norm, q3.f1_predicted, 0.01 * q3.f1_predicted);
  EXPECT_NEAR(q3.f2_norm, q3.f2_predicted, 0.01 * q3.f2_predicted);
}

TEST(Probe, DifferenceErrorShrinksQuadratically) {
  for (std::size_t n : {2u, 3u, 4u}) {
    const double e3 = std::abs(appendix_probe(n, 1e3).diff_norm - appendix_probe(n, 1e3).predicted);
    const double e4 = std::abs(appendix_probe(n, 1e4).diff_norm - appendix_probe(n, 1e4).predicted);
    EXPECT_LT(e4, e3);
    if (e3 > 0.0) {
      EXPECT_NEAR(e3 / e4, 100.0, 5.0) << "n=" << n;
    }
  }
  EXPECT_NEAR(appendix_probe(3, 1e4).diff_norm, 21.0, 0.021);
}

TEST(Probe, RejectsBadArguments) {
  EXPECT_THROW(appendix_probe(1, 1e3), Error);
  EXPECT_THROW(appendix_probe(3, 5.0), Error);
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(8, 2), 28.0);
  EXPECT_EQ(binomial(6, 0), 1.0);
  EXPECT_EQ(binomial(3, -1), 0.0);
  EXPECT_EQ(binomial(24, 12), 2704156.0);
}
