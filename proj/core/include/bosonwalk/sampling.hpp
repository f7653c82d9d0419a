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

#include <cstdint>
#include <span>
#include <vector>

#include "bosonwalk/fock.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

inline constexpr std::uint64_t kFockBasisLimit = 1'000'000;
inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-9;

/// C(N + M - 1, N), saturating at UINT64_MAX.
std::uint64_t fock_basis_size(Index modes, int particles);

/// All occupations of `particles` bosons in `modes` modes, ordered
/// lexicographically from (N, 0, ..., 0) down to (0, ..., 0, N). Every
/// distribution uses this order, so distributions from different code paths
/// align index by index.
std::vector<FockState> enumerate_fock(Index modes, int particles);

/// Output distribution over the full Fock basis.
class FockDistribution {
 public:
  /// `basis` must be the enumerate_fock order. Probabilities in
  /// [-1e-12, 0) are clamped to 0; anything more negative, or a total that
  /// misses 1 by more than 1e-9, throws.
  FockDistribution(std::vector<FockState> basis, std::vector<double> probabilities);

  Index modes() const { return basis_.front().modes(); }
  int particles() const { return basis_.front().particles(); }
  std::size_t size() const { return basis_.size(); }
  const std::vector<FockState>& basis() const { return basis_; }
  std::span<const double> probabilities() const { return probabilities_; }

  std::size_t index_of(const FockState& state) const;
  double probability(const FockState& state) const;

 private:
  std::vector<FockState> basis_;
  std::vector<double> probabilities_;
};

/// P(n_out | n_in) for every n_out.
FockDistribution exact_distribution(const UnitaryMatrix& lambda, const FockState& n_in);

struct RenormalizedDistribution {
  FockDistribution distribution;
  double raw_mass = 0.0;  // sum of the unnormalized weights

  double mass_deficit() const { return 1.0 - raw_mass; }
};

/// Permanent weights of a sub-unitary matrix (e.g. a banded truncation),
/// rescaled to sum to one.
RenormalizedDistribution renormalized_distribution(const ComplexMatrix& lambda,
                                                   const FockState& n_in);

/// k i.i.d. basis indices by inverse CDF.
std::vector<std::size_t> sample_indices(const FockDistribution& dist, std::size_t k, Rng& rng);

std::vector<FockState> sample(const FockDistribution& dist, std::size_t k, Rng& rng);
std::vector<FockState> sample(const FockDistribution& dist, std::size_t k, RngSeed seed);

/// (1/2) sum |P - Q|
double total_variation(const FockDistribution& p, const FockDistribution& q);

struct MultiplicativeGap {
  double gap = 0.0;          // max |P - Q| / P over events with P > floor
  std::size_t skipped = 0;   // events with P <= floor
  double floor = kProbabilityFloor;
};

MultiplicativeGap multiplicative_gap(const FockDistribution& p, const FockDistribution& q,
                                     double floor = kProbabilityFloor);

}  // namespace bosonwalk
