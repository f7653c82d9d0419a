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

#include <complex>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "bosonwalk/error.hpp"

namespace bosonwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// The random stream used everywhere a draw is needed. Always passed
/// explicitly; there is no global generator.
using Rng = std::mt19937_64;

struct RngSeed {
  std::uint64_t value = 0;

  Rng stream() const { return Rng(value); }
};

// Tolerance ladder: constructor checks one order tighter than residual checks.
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kReconstructionTolerance = 1e-9;

/// Entrywise max norm.
double max_abs(const ComplexMatrix& m);

/// ||m - m^dagger||_max
double hermiticity_residual(const ComplexMatrix& m);

/// ||m^dagger m - 1||_max
double unitarity_residual(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// Square complex matrix whose unitarity was checked on construction.
class UnitaryMatrix {
 public:
  /// Throws bosonwalk::Error if `m` is not square, has non-finite entries, or
  /// misses unitarity by more than `tolerance` in max norm.
  explicit UnitaryMatrix(ComplexMatrix m, double tolerance = kUnitaryTolerance);

  static UnitaryMatrix identity(Index d);

  /// Circulant with the given first row. Unitarity is checked on the FFT
  /// spectrum (every |c_q| within `tolerance` of 1) instead of densely.
  static UnitaryMatrix circulant(std::span<const Complex> first_row,
                                 double tolerance = kUnitaryTolerance);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Complex operator()(Index row, Index col) const { return m_(row, col); }

  UnitaryMatrix adjoint() const;

  /// Products of unitaries are unitary; the check is skipped here.
  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  struct Unchecked {};
  UnitaryMatrix(Unchecked, ComplexMatrix m) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

struct HermitianEigensystem {
  RealVector eigenvalues;  // ascending
  UnitaryMatrix eigenvectors;
};

/// h = V diag(w) V^dagger. Throws "not Hermitian" when ||h - h^dagger||_max
/// exceeds kHermitianTolerance, and reports the iteration budget when the
/// QR iteration fails to converge.
HermitianEigensystem hermitian_eig(const ComplexMatrix& h);

/// exp(-i h t) through the eigendecomposition of h.
UnitaryMatrix expm_hermitian(const ComplexMatrix& h, double t);
UnitaryMatrix expm_hermitian(const HermitianEigensystem& eig, double t);

/// Haar-distributed unitary: complex Ginibre matrix, Householder QR, then the
/// columns of Q rephased by R_jj / |R_jj|.
UnitaryMatrix haar_unitary(Index d, Rng& rng);
UnitaryMatrix haar_unitary(Index d, RngSeed seed);

/// Eigenvalues c_q = sum_l row_l exp(-2 pi i q l / M) of the circulant whose
/// first row is `first_row`, computed with an FFT.
ComplexVector circulant_diagonalize(std::span<const Complex> first_row);

/// Dense circulant C_{jk} = first_row[(k - j) mod M].
ComplexMatrix circulant_matrix(std::span<const Complex> first_row);

}  // namespace bosonwalk
