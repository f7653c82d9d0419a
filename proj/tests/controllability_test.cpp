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

#include <algorithm>
#include <numbers>

#include "bosonwalk/controllability.hpp"
#include "oracles.hpp"

namespace bosonwalk {
namespace {

constexpr double kPi = std::numbers::pi;

GasMicroscopeModel microscope(Index sites) {
  GasMicroscopeModel g;
  g.sites = sites;
  return g;
}

ComplexMatrix pauli(char which) {
  ComplexMatrix s(2, 2);
  if (which == 'x') s << 0.0, 1.0, 1.0, 0.0;
  if (which == 'y') s << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  if (which == 'z') s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

GeneratorSet set_of(const std::vector<ComplexMatrix>& hs) {
  GeneratorSet g;
  for (std::size_t i = 0; i < hs.size(); ++i) g.add(hs[i], "g" + std::to_string(i));
  return g;
}

TEST(GellMann, OrthogonalityAndCount) {
  for (Index m : {2, 3, 4, 6}) {
    const std::vector<ComplexMatrix> e = GellMannBasis(m).elements();
    ASSERT_EQ(static_cast<Index>(e.size()), m * m - 1);
    for (std::size_t a = 0; a < e.size(); ++a) {
      EXPECT_LE(hermiticity_residual(e[a]), 0.0);
      EXPECT_NEAR(std::abs(e[a].trace()), 0.0, 1e-14);
      for (std::size_t b = 0; b < e.size(); ++b) {
        EXPECT_NEAR(std::abs((e[a] * e[b]).trace() - Complex(a == b ? 2.0 : 0.0)), 0.0, 1e-14);
      }
    }
  }
}

TEST(GellMann, PhaseAccessorInterpolates) {
  const GellMannBasis gm(4);
  const double phase = 0.7;
  EXPECT_LT(max_abs(gm.phi(1, 3, phase) - (std::cos(phase) * gm.x(1, 3) + std::sin(phase) * gm.y(1, 3))), 1e-15);
  EXPECT_LT(max_abs(gm.phi(0, 2, 0.0) - gm.x(0, 2)), 1e-15);
  EXPECT_LT(max_abs(gm.phi(0, 2, kPi / 2) - gm.y(0, 2)), 1e-15);
}

TEST(GeneratorSet, ValidatesInput) {
  GeneratorSet g;
  ComplexMatrix bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(g.add(bad, "bad"), Error);
  g.add(pauli('x'), "x");
  EXPECT_THROW(g.add(ComplexMatrix::Identity(3, 3), "wrong size"), Error);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.dim(), 2);
}

TEST(SampleGenerators, MicroscopeCanonicalGridGivesElementaryTerms) {
  const GasMicroscopeModel g = microscope(3);
  const GeneratorSet set = sample_generators(g, canonical_grid(g));
  EXPECT_EQ(set.labels(), (std::vector<std::string>{"hx_1", "hx_2", "hz_1", "hz_2", "hz_3"}));
  ComplexMatrix bond1 = ComplexMatrix::Zero(3, 3);
  bond1(0, 1) = bond1(1, 0) = 1.0;
  EXPECT_EQ(set.generators()[0], bond1);
  ComplexMatrix site3 = ComplexMatrix::Zero(3, 3);
  site3(2, 2) = 1.0;
  EXPECT_EQ(set.generators()[4], site3);
}

TEST(SampleGenerators, SpinorGridIsDeduplicated) {
  const SpinorLatticeModel s = make_spinor_model(2);
  const ControlGrid grid = canonical_grid(s);
  EXPECT_EQ(grid.size(), 6u);
  const GeneratorSet set = sample_generators(s, grid);
  EXPECT_GE(set.size(), 4u);
  EXPECT_LE(set.size(), 6u);

  ControlGrid repeated = grid;
  repeated.insert(repeated.end(), grid.begin(), grid.end());
  repeated.push_back({kPi / 2 + 2 * kPi, 0.0});
  EXPECT_EQ(sample_generators(s, repeated).size(), set.size());
}

TEST(SampleGenerators, NonemptyGridNeverEmpties) {
  const GasMicroscopeModel g = microscope(2);
  EXPECT_EQ(sample_generators(g, {{0.0, 0.0, 0.0}}).size(), 1u);
  EXPECT_THROW(sample_generators(g, {}), Error);
  EXPECT_THROW(sample_generators(g, {{1.0}}), Error);
}

TEST(Closure, SingleGeneratorIsAbelian) {
  const ClosureResult r = lie_closure_dimension(set_of({pauli('x')}));
  EXPECT_EQ(r.dimension, 1);
  EXPECT_FALSE(r.saturated);
}

TEST(Closure, TwoPaulisGiveSu2) {
  const ClosureResult r = lie_closure_dimension(set_of({pauli('x'), pauli('z')}));
  EXPECT_EQ(r.dimension, 3);
  EXPECT_TRUE(r.saturated);
  EXPECT_FALSE(r.contains_identity);
  EXPECT_EQ(r.round_dimensions.front(), 2);
  EXPECT_EQ(r.round_dimensions.back(), 3);
}

TEST(Closure, MicroscopeSpansFullUnitaryAlgebra) {
  for (Index m = 2; m <= 6; ++m) {
    const GasMicroscopeModel g = microscope(m);
    const ClosureResult r = lie_closure_dimension(sample_generators(g, canonical_grid(g)));
    EXPECT_EQ(r.dimension, m * m) << "M = " << m;
    EXPECT_TRUE(r.saturated);
    EXPECT_TRUE(r.contains_identity);
  }
}

TEST(Closure, SpinorReachesSuOfTwoM) {
  for (Index m : {2, 3}) {
    const SpinorLatticeModel s = make_spinor_model(m);
    const ClosureResult r = lie_closure_dimension(sample_generators(s, canonical_grid(s)));
    EXPECT_GE(r.dimension, (2 * m) * (2 * m) - 1) << "M = " << m;
    EXPECT_TRUE(r.saturated);
  }
}

TEST(Closure, InvariantUnderRescalingConjugationAndOrder) {
  Rng rng(3);
  const GasMicroscopeModel g = microscope(4);
  const GeneratorSet full = sample_generators(g, canonical_grid(g));
  // Bonds and one site: a proper subalgebra is a sharper test than u(4).
  std::vector<ComplexMatrix> hs(full.generators().begin(), full.generators().begin() + 4);
  const Index base = lie_closure_dimension(set_of(hs)).dimension;

  std::vector<ComplexMatrix> scaled = hs;
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= 0.1 + 3.0 * static_cast<double>(i);
  EXPECT_EQ(lie_closure_dimension(set_of(scaled)).dimension, base);

  const ComplexMatrix u = haar_unitary(4, rng).matrix();
  std::vector<ComplexMatrix> conj;
  for (const ComplexMatrix& h : hs) conj.push_back(u * h * u.adjoint());
  EXPECT_EQ(lie_closure_dimension(set_of(conj)).dimension, base);

  std::vector<ComplexMatrix> shuffled = hs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(lie_closure_dimension(set_of(shuffled)).dimension, base);
}

TEST(Closure, AddingGeneratorsNeverShrinks) {
  Rng rng(4);
  std::vector<ComplexMatrix> hs;
  Index previous = 0;
  GellMannBasis gm(4);
  const std::vector<ComplexMatrix> pool{gm.z(0), gm.z(1), gm.x(0, 1), gm.x(2, 3), gm.y(1, 2),
                                        oracle::random_hermitian(4, rng)};
  for (const ComplexMatrix& h : pool) {
    hs.push_back(h);
    const Index dim = lie_closure_dimension(set_of(hs)).dimension;
    EXPECT_GE(dim, previous);
    previous = dim;
  }
  EXPECT_EQ(previous, 16);
}

TEST(Closure, MaxDimStopsEarly) {
  const GasMicroscopeModel g = microscope(5);
  const ClosureResult r = lie_closure_dimension(sample_generators(g, canonical_grid(g)), 12);
  EXPECT_TRUE(r.hit_max_dim);
  EXPECT_EQ(r.dimension, 12);
  EXPECT_FALSE(r.saturated);
}

TEST(Closure, DimensionGuard) {
  GeneratorSet big;
  big.add(ComplexMatrix::Identity(65, 65), "identity");
  EXPECT_THROW(lie_closure_dimension(big), Error);
  EXPECT_THROW(lie_closure_dimension(GeneratorSet{}), Error);
}

TEST(Proportionality, BondSiteCommutatorByHand) {
  const GellMannBasis gm(2);
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const ComplexMatrix x = gm.x(0, 1);
  const IdentityCheck c = proportionality("bond-site", "G_y", x * p - p * x, gm.y(0, 1), 1e-8);
  EXPECT_TRUE(c.passed);
  EXPECT_LT(c.residual, 1e-15);
  EXPECT_LT(std::abs(c.constant - Complex(0.0, -1.0)), 1e-15);
}

TEST(Proportionality, DegenerateCases) {
  const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  EXPECT_EQ(proportionality("a", "b", z, z, 1e-8).residual, 0.0);
  EXPECT_EQ(proportionality("a", "b", pauli('x'), z, 1e-8).residual, 1.0);
  EXPECT_EQ(proportionality("a", "b", z, pauli('x'), 1e-8).residual, 1.0);
  const IdentityCheck off = proportionality("a", "b", pauli('x'), pauli('z'), 1e-8);
  EXPECT_FALSE(off.passed);
  EXPECT_NEAR(off.residual, 1.0, 1e-15);
}

TEST(Kron, MatchesDefinition) {
  const ComplexMatrix k = kron(pauli('x'), pauli('z'));
  EXPECT_EQ(k(0, 2), Complex(1.0));
  EXPECT_EQ(k(1, 3), Complex(-1.0));
  EXPECT_EQ(k(0, 0), Complex(0.0));
}

TEST(Identities, HoldForSeveralRingSizes) {
  for (Index m = 3; m <= 6; ++m) {
    const IdentityReport r = verify_appendix_identities(m);
    EXPECT_TRUE(r.all_passed()) << "M = " << m;
    EXPECT_GE(r.checks.size(), 5u);
    for (const IdentityCheck& c : r.checks) {
      EXPECT_LE(c.residual, 1e-8) << c.name << " at M = " << m;
      EXPECT_GT(std::abs(c.constant), 0.0) << c.name;
    }
  }
}

TEST(Identities, TwoSitesReportsAFailureWithoutThrowing) {
  const IdentityReport r = verify_appendix_identities(2);
  EXPECT_FALSE(r.all_passed());
  const auto failing = std::find_if(r.checks.begin(), r.checks.end(),
                                    [](const IdentityCheck& c) { return !c.passed; });
  ASSERT_NE(failing, r.checks.end());
  EXPECT_FALSE(failing->name.empty());
  EXPECT_GT(failing->residual, 1e-8);
}

TEST(Identities, RangeGuard) {
  EXPECT_THROW(verify_appendix_identities(1), Error);
  EXPECT_THROW(verify_appendix_identities(7), Error);
}

}  // namespace
}  // namespace bosonwalk
