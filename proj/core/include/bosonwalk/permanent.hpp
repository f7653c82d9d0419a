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
#include <string_view>
#include <vector>

#include "bosonwalk/fock.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

enum class PermanentMethod { kRyser, kBandedDp, kCyclicDp, kTransferPower };

std::string_view to_string(PermanentMethod method);

struct PermanentResult {
  Complex value;
  PermanentMethod method = PermanentMethod::kRyser;
  /// Complex multiply-adds actually performed.
  std::uint64_t cost_estimate = 0;
};

inline constexpr Index kDensePermanentLimit = 24;
inline constexpr Index kBandLimit = 14;

struct PermanentOptions {
  /// Sequential Gray-code sweep with a fixed summation order. When false the
  /// sweep is split across `threads` workers (0 = hardware concurrency).
  bool deterministic = true;
  unsigned threads = 0;
};

/// Glynn's formula over a Gray-code walk of the sign vectors, O(2^N N), with
/// compensated summation. The reference oracle for every other method.
PermanentResult permanent_dense(const ComplexMatrix& a, const PermanentOptions& options = {});

/// Square matrix whose nonzeros lie on offsets (i - j) in [-upper, lower],
/// optionally taken mod N (cyclic). Entries outside the band are exactly zero.
class BandedMatrix {
 public:
  BandedMatrix(Index n, Index lower, Index upper, bool cyclic);

  /// Throws if `a` has a nonzero entry outside the requested band.
  static BandedMatrix from_dense(const ComplexMatrix& a, Index lower, Index upper, bool cyclic);

  /// Uses the smallest band measured on the nonzero pattern of `a`.
  static BandedMatrix from_dense(const ComplexMatrix& a);

  /// Circulant band: entry (i, j) = diagonal[(i - j) + upper] for cyclic
  /// offsets in [-upper, lower]. `diagonal` has lower + upper + 1 values.
  static BandedMatrix circulant(Index n, Index lower, Index upper,
                                const std::vector<Complex>& diagonal);

  Index dim() const { return n_; }
  Index lower() const { return lower_; }
  Index upper() const { return upper_; }
  Index band() const { return lower_ + upper_; }
  bool cyclic() const { return cyclic_; }

  bool in_band(Index i, Index j) const;
  Complex operator()(Index i, Index j) const;
  void set(Index i, Index j, Complex value);

  /// Entry of column j on offset o = i - j, o in [-upper, lower].
  Complex on_diagonal(Index offset, Index column) const;

  bool is_circulant(double relative_tolerance = 1e-12) const;
  ComplexMatrix to_dense() const;

 private:
  bool offset_valid(Index offset, Index column) const;

  Index n_;
  Index lower_;
  Index upper_;
  bool cyclic_;
  // diagonals_(offset + upper, column)
  ComplexMatrix diagonals_;
};

/// Column-sweep subset dynamic program over a sliding window of B + 1 rows.
/// The cyclic case conditions on which boundary rows are reached through the
/// wrap-around and sums the 2^B conditioned sweeps, O(N 4^B) overall.
PermanentResult permanent_banded(const BandedMatrix& a);

/// Same sweep for circulant bands: the column transfer operator is identical
/// for all interior columns, so its power is taken by repeated squaring and
/// only the boundary columns are applied explicitly. Throws for
/// non-circulant input.
PermanentResult permanent_circulant_banded(const BandedMatrix& a);

/// Columns repeated per n_in, rows repeated per n_out.
ComplexMatrix transition_submatrix(const ComplexMatrix& lambda, const FockState& n_in,
                                   const FockState& n_out);

/// |Perm(sub)|^2 / (prod n_in! prod n_out!) without assuming lambda is unitary.
double transition_weight(const ComplexMatrix& lambda, const FockState& n_in,
                         const FockState& n_out);

double transition_probability(const UnitaryMatrix& lambda, const FockState& n_in,
                              const FockState& n_out);

}  // namespace bosonwalk
