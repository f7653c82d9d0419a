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


#pragma once

#include <span>
#include <string>
#include <vector>

#include "bosonwalk/lattice.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

/// Hermitian generators H; the algebra elements are i H.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  /// Throws when `h` is not Hermitian within 1e-10 or has the wrong size.
  void add(ComplexMatrix h, std::string label);

  Index dim() const { return generators_.empty() ? 0 : generators_.front().rows(); }
  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<ComplexMatrix> generators_;
  std::vector<std::string> labels_;
};

/// Generalized Gell-Mann matrices of dimension M, indices 0-based:
///   x(j, k) = |j><k| + |k><j|
///   y(j, k) = -i |j><k| + i |k><j|
///   z(l)    = sqrt(2 / ((l+1)(l+2))) (sum_{m<=l} |m><m| - (l+1) |l+1><l+1|)
/// with j < k and 0 <= l < M - 1. All elements satisfy Tr(G_a G_b) = 2 delta_ab.
class GellMannBasis {
 public:
  explicit GellMannBasis(Index m);

  Index dim() const { return m_; }
  ComplexMatrix x(Index j, Index k) const;
  ComplexMatrix y(Index j, Index k) const;
  ComplexMatrix z(Index l) const;
  /// e^{-i phi} |j><k| + e^{i phi} |k><j| = cos(phi) x + sin(phi) y
  ComplexMatrix phi(Index j, Index k, double phase) const;

  /// All M^2 - 1 elements: x pairs, y pairs, then diagonals.
  std::vector<ComplexMatrix> elements() const;

 private:
  Index m_;
};

/// One control setting per grid point, values in control_channels() order.
using ControlGrid = std::vector<std::vector<double>>;

/// Spinor: theta in {0, pi/2, pi} x phi in {0, pi/2}. Microscope: one unit
/// vector per bond and per site.
ControlGrid canonical_grid(const LatticeModel& model);

/// H evaluated at each grid point; generators closer than 1e-10 in trace norm
/// to an earlier one are dropped.
GeneratorSet sample_generators(const LatticeModel& model, const ControlGrid& grid);

struct ClosureResult {
  Index dimension = 0;
  bool saturated = false;         // the traceless part spans su(d)
  bool contains_identity = false;
  bool hit_max_dim = false;
  std::vector<Index> round_dimensions;  // span after the generators, then after each round
};

inline constexpr double kClosureRankTolerance = 1e-8;
inline constexpr Index kClosureDimLimit = 4096;  // bound on d^2

/// Dimension of the real Lie algebra generated by {i H}: breadth-first
/// commutators with modified Gram-Schmidt under the trace inner product.
ClosureResult lie_closure_dimension(const GeneratorSet& gens, Index max_dim = kClosureDimLimit);

struct IdentityCheck {
  std::string name;
  std::string claimed;
  Complex constant{0.0, 0.0};  // commutator ~= constant * claimed operator
  double residual = 0.0;       // ||C - constant O|| / ||C||
  bool passed = false;
};

struct IdentityReport {
  Index sites = 0;
  double tolerance = 1e-8;
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
};

/// Evaluates the commutator chain behind the controllability argument for
/// the spinor model with M sites per sublattice (2 <= M <= 6), plus the
/// bond/site identity of the microscope model. Spinor operators use the
/// layout kron(spin, site) with spin down first, sigma_z = diag(-1, +1).
IdentityReport verify_appendix_identities(Index sites, double tolerance = 1e-8);

/// ||c - (<o, c> / <o, o>) o||_F / ||c||_F; 0 when both vanish, 1 when only
/// one does.
IdentityCheck proportionality(std::string name, std::string claimed, const ComplexMatrix& c,
                              const ComplexMatrix& o, double tolerance);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace bosonwalk
