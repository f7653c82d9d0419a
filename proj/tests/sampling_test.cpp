/*
 * Copyright 2026 The bosonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "bosonwalk/lattice.hpp"
#include "bosonwalk/sampling.hpp"
#include "oracles.hpp"

namespace bosonwalk {
namespace {

UnitaryMatrix beamsplitter() {
  ComplexMatrix bs(2, 2);
  bs << 1.0, 1.0, 1.0, -1.0;
  return UnitaryMatrix(bs / std::sqrt(2.0));
}

FockDistribution point_mass(Index modes, int particles, const FockState& at) {
  std::vector<FockState> basis = enumerate_fock(modes, particles);
  std::vector<double> p(basis.size(), 0.0);
  p[static_cast<std::size_t>(std::find(basis.begin(), basis.end(), at) - basis.begin())] = 1.0;
  return FockDistribution(std::move(basis), std::move(p));
}

TEST(EnumerateFock, SmallExamples) {
  const std::vector<FockState> two = enumerate_fock(2, 1);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], FockState({1, 0}));
  EXPECT_EQ(two[1], FockState({0, 1}));
  EXPECT_EQ(enumerate_fock(3, 2).size(), 6u);
  EXPECT_EQ(enumerate_fock(4, 0).size(), 1u);
}

TEST(EnumerateFock, CountsOrderAndUniqueness) {
  for (Index m = 1; m <= 8; ++m) {
    for (int n = 0; n <= 5; ++n) {
      const std::vector<FockState> basis = enumerate_fock(m, n);
      EXPECT_EQ(basis.size(), fock_basis_size(m, n));
      for (const FockState& s : basis) EXPECT_EQ(s.particles(), n);
      EXPECT_TRUE(std::is_sorted(basis.begin(), basis.end(), std::greater<>()));
      EXPECT_EQ(std::set<FockState>(basis.begin(), basis.end()).size(), basis.size());
    }
  }
  EXPECT_EQ(enumerate_fock(8, 3).size(), 120u);
}

TEST(EnumerateFock, GuardReportsCount) {
  EXPECT_EQ(fock_basis_size(30, 10), 635745396u);
  try {
    enumerate_fock(30, 10);
    FAIL() << "expected the enumeration guard";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("635745396"), std::string::npos) << e.what();
  }
  EXPECT_EQ(fock_basis_size(1000, 1000), std::numeric_limits<std::uint64_t>::max());
}

TEST(FockDistribution, Validation) {
  const std::vector<FockState> basis = enumerate_fock(2, 1);
  EXPECT_THROW(FockDistribution(basis, {0.5, 0.4}), Error);
  EXPECT_THROW(FockDistribution(basis, {1.1, -0.1}), Error);
  EXPECT_THROW(FockDistribution(basis, {1.0}), Error);
  const FockDistribution ok(basis, {1.0 + 1e-13, -1e-13});
  EXPECT_EQ(ok.probabilities()[1], 0.0);
  EXPECT_EQ(ok.index_of(FockState({0, 1})), 1u);
  EXPECT_THROW(ok.probability(FockState({2, 0})), Error);
}

TEST(ExactDistribution, IdentityGivesPointMass) {
  const FockState in({0, 2, 1, 0});
  const FockDistribution d = exact_distribution(UnitaryMatrix(ComplexMatrix::Identity(4, 4)), in);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(d.probabilities()[i], d.basis()[i] == in ? 1.0 : 0.0, 1e-15);
  }
}

TEST(ExactDistribution, HongOuMandel) {
  const FockDistribution d = exact_distribution(beamsplitter(), FockState({1, 1}));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_NEAR(d.probabilities()[0], 0.5, 1e-15);
  EXPECT_NEAR(d.probabilities()[1], 0.0, 1e-15);
  EXPECT_NEAR(d.probabilities()[2], 0.5, 1e-15);
}

TEST(ExactDistribution, MatchesStateVectorOracle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const UnitaryMatrix u = haar_unitary(6, RngSeed{seed});
    for (const FockState& in : {FockState({1, 0, 0, 1, 0, 0}), FockState({0, 0, 2, 0, 0, 0})}) {
      const FockDistribution d = exact_distribution(u, in);
      const auto amps = oracle::state_vector_amplitudes(u.matrix(), in);
      ASSERT_EQ(amps.size(), d.size());
      for (const auto& [occ, amp] : amps) {
        EXPECT_NEAR(d.probability(FockState(occ)), std::norm(amp), 1e-12);
      }
    }
  }
}

TEST(ExactDistribution, RejectsMismatchedModes) {
  EXPECT_THROW(exact_distribution(beamsplitter(), FockState({1, 1, 0})), Error);
}

TEST(RenormalizedDistribution, ReportsMassDeficit) {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(3, 3);
  const RenormalizedDistribution r = renormalized_distribution(half, FockState({1, 1, 0}));
  EXPECT_NEAR(r.raw_mass, 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(r.mass_deficit(), 15.0 / 16.0, 1e-15);
  EXPECT_NEAR(r.distribution.probability(FockState({1, 1, 0})), 1.0, 1e-15);
  EXPECT_THROW(renormalized_distribution(ComplexMatrix::Zero(2, 2), FockState({1, 0})), Error);
}

TEST(Sample, PointMassRepeats) {
  const FockState at({0, 1, 1});
  for (const FockState& s : sample(point_mass(3, 2, at), 100, RngSeed{3})) EXPECT_EQ(s, at);
}

TEST(Sample, UniformTwoStatesWithinFourSigma) {
  const FockDistribution d(enumerate_fock(2, 1), {0.5, 0.5});
  Rng rng(17);
  const std::vector<std::size_t> idx = sample_indices(d, 10000, rng);
  const auto first = std::count(idx.begin(), idx.end(), std::size_t{0});
  EXPECT_LE(std::abs(static_cast<double>(first) - 5000.0), 4.0 * 50.0);
}

TEST(Sample, DeterministicForSeed) {
  const FockDistribution d = exact_distribution(haar_unitary(4, RngSeed{8}), FockState({1, 1, 0, 0}));
  EXPECT_EQ(sample(d, 500, RngSeed{99}), sample(d, 500, RngSeed{99}));
  EXPECT_NE(sample(d, 500, RngSeed{99}), sample(d, 500, RngSeed{100}));
}

TEST(Sample, NeverDrawsZeroProbabilityStates) {
  const FockDistribution d = exact_distribution(beamsplitter(), FockState({1, 1}));
  for (const FockState& s : sample(d, 5000, RngSeed{4})) EXPECT_NE(s, FockState({1, 1}));
}

TEST(Sample, ChiSquareAgainstExactDistribution) {
  const FockDistribution d = exact_distribution(haar_unitary(4, RngSeed{21}), FockState({1, 1, 1, 0}));
  const std::size_t draws = 10000;
  int passing = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::vector<double> counts(d.size(), 0.0);
    Rng rng(seed);
    for (std::size_t i : sample_indices(d, draws, rng)) counts[i] += 1.0;
    // Pool states with expected count below 5 into one bin.
    double stat = 0.0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double e = d.probabilities()[i] * static_cast<double>(draws);
      if (e < 5.0) {
        pooled_obs += counts[i];
        pooled_exp += e;
        continue;
      }
      stat += (counts[i] - e) * (counts[i] - e) / e;
      ++bins;
    }
    if (pooled_exp > 0.0) {
      stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      ++bins;
    }
    const boost::math::chi_squared chi(bins - 1);
    if (boost::math::cdf(boost::math::complement(chi, stat)) > 1e-4) ++passing;
  }
  EXPECT_GE(passing, 99);
}

TEST(TotalVariation, Examples) {
  const FockDistribution hom = exact_distribution(beamsplitter(), FockState({1, 1}));
  EXPECT_EQ(total_variation(hom, hom), 0.0);
  EXPECT_EQ(total_variation(point_mass(2, 2, FockState({2, 0})), point_mass(2, 2, FockState({0, 2}))), 1.0);
  const FockDistribution classical(enumerate_fock(2, 2), {0.25, 0.5, 0.25});
  EXPECT_NEAR(total_variation(hom, classical), 0.5, 1e-15);
  EXPECT_THROW(total_variation(hom, point_mass(3, 2, FockState({2, 0, 0}))), Error);
}

TEST(MultiplicativeGap, Examples) {
  const FockDistribution p = exact_distribution(haar_unitary(3, RngSeed{2}), FockState({1, 1, 0}));
  EXPECT_EQ(multiplicative_gap(p, p).gap, 0.0);

  // Q = (1 +/- eps) P, renormalized.
  const double eps = 1e-3;
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = p.probabilities()[i] * (i % 2 ? 1 - eps : 1 + eps);
  const double mass = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& x : q) x /= mass;
  const MultiplicativeGap g = multiplicative_gap(p, FockDistribution(p.basis(), q));
  EXPECT_NEAR(g.gap, eps, 2.5 * eps * eps + 2.0 * std::abs(mass - 1.0));
  EXPECT_EQ(g.skipped, 0u);

  const MultiplicativeGap hom = multiplicative_gap(exact_distribution(beamsplitter(), FockState({1, 1})),
                                                   FockDistribution(enumerate_fock(2, 2), {0.25, 0.5, 0.25}));
  EXPECT_EQ(hom.skipped, 1u);
  EXPECT_NEAR(hom.gap, 0.5, 1e-14);
}

TEST(MultiplicativeGap, BoundsTotalVariation) {
  Rng rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FockDistribution p = exact_distribution(haar_unitary(4, rng), FockState({1, 0, 1, 0}));
    const double eps = std::pow(10.0, -1.0 - trial % 4);
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p.probabilities()[i] * (1.0 + eps * unit(rng));
    const double mass = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& x : q) x /= mass;
    const FockDistribution qd(p.basis(), q);
    const MultiplicativeGap g = multiplicative_gap(p, qd);
    ASSERT_EQ(g.skipped, 0u);
    EXPECT_LE(total_variation(p, qd), g.gap + 1e-15);
  }
}

TEST(MultiplicativeGap, ShrinksWithBandThreshold) {
  // On the 8-site ring at t = 2 every offset is above 1e-2, so truncation is a
  // no-op; the shorter time actually drops offsets at each threshold.
  for (auto [m, t, strict] : std::vector<std::tuple<Index, double, bool>>{{8, 2.0, false}, {10, 0.5, true}}) {
    const ComplexMatrix lambda = ring_propagator({m, 1.0}, t).matrix();
    const FockState in = FockState::from_modes(m, std::vector<Index>{0, 2, 4});
    const FockDistribution exact = exact_distribution(UnitaryMatrix(lambda), in);
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const FockDistribution q =
          renormalized_distribution(band_truncate(lambda, eps).truncated, in).distribution;
      const double gap = multiplicative_gap(exact, q).gap;
      EXPECT_TRUE(std::isfinite(gap));
      if (strict) {
        EXPECT_LT(gap, previous) << "M " << m << " eps " << eps;
      } else {
        EXPECT_LE(gap, previous) << "M " << m << " eps " << eps;
      }
      previous = gap;
    }
  }
}

TEST(Banding, TotalVariationIsOrderEpsilon) {
  for (Index m : {4, 6, 8, 10}) {
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      const ComplexMatrix lambda = ring_propagator({m, 1.0}, t).matrix();
      for (int n = 1; n <= 3; ++n) {
        std::vector<Index> modes;
        for (int p = 0; p < n; ++p) modes.push_back((p * 3) % m);
        const FockState in = FockState::from_modes(m, modes);
        const FockDistribution exact = exact_distribution(UnitaryMatrix(lambda), in);
        for (double eps : {1e-3, 1e-4}) {
          const FockDistribution q = renormalized_distribution(band_truncate(lambda, eps).truncated, in).distribution;
          EXPECT_LE(total_variation(exact, q), 10.0 * eps) << "M " << m << " t " << t << " N " << n << " eps " << eps;
        }
      }
    }
  }
}

TEST(ExactDistribution, ExchangeSymmetry) {
  Rng rng(77);
  const Index m = 5;
  const UnitaryMatrix u = haar_unitary(m, rng);
  const FockState in({1, 0, 2, 0, 0});
  std::vector<Index> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Relabel mode k as perm[k] everywhere.
  ComplexMatrix v(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) v(perm[i], perm[j]) = u.matrix()(i, j);
  }
  const auto relabel = [&](const FockState& s) {
    std::vector<int> occ(m);
    for (Index k = 0; k < m; ++k) occ[static_cast<std::size_t>(perm[k])] = s[k];
    return FockState(occ);
  };
  const FockDistribution a = exact_distribution(u, in);
  const FockDistribution b = exact_distribution(UnitaryMatrix(v), relabel(in));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.probabilities()[i], b.probability(relabel(a.basis()[i])), 1e-13);
  }
}

}  // namespace
}  // namespace bosonwalk
