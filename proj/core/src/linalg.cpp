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

#include "bosonwalk/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace bosonwalk {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

double unitarity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
}

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double tolerance) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    std::ostringstream msg;
    msg << "unitary matrix must be square, got " << m_.rows() << "x" << m_.cols();
    throw Error(msg.str());
  }
  if (!m_.allFinite()) throw Error("unitary matrix has non-finite entries");
  const double residual = unitarity_residual(m_);
  if (!(residual <= tolerance)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: ||U^dagger U - 1||_max = " << residual;
    throw Error(msg.str());
  }
}

UnitaryMatrix UnitaryMatrix::identity(Index d) {
  return UnitaryMatrix(Unchecked{}, ComplexMatrix::Identity(d, d));
}

UnitaryMatrix UnitaryMatrix::circulant(std::span<const Complex> first_row, double tolerance) {
  const ComplexVector spectrum = circulant_diagonalize(first_row);
  if (!spectrum.allFinite()) throw Error("unitary matrix has non-finite entries");
  const double residual = (spectrum.cwiseAbs2().array() - 1.0).abs().maxCoeff();
  if (!(residual <= tolerance)) {
    std::ostringstream msg;
    msg << "circulant is not unitary: max ||c_q|^2 - 1| = " << residual;
    throw Error(msg.str());
  }
  return UnitaryMatrix(Unchecked{}, circulant_matrix(first_row));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  return UnitaryMatrix(Unchecked{}, m_.adjoint());
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw Error("unitary product dimension mismatch");
  return UnitaryMatrix(UnitaryMatrix::Unchecked{}, a.m_ * b.m_);
}

HermitianEigensystem hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw Error("not Hermitian: matrix is not square");
  const double residual = hermiticity_residual(h);
  if (!(residual <= kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "not Hermitian: ||h - h^dagger||_max = " << residual;
    throw Error(msg.str());
  }
  // Symmetrize so that sub-tolerance asymmetry cannot leak into the solver.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "hermitian_eig did not converge within "
        << Eigen::SelfAdjointEigenSolver<ComplexMatrix>::m_maxIterations * sym.rows()
        << " QR iterations";
    throw Error(msg.str());
  }
  return HermitianEigensystem{solver.eigenvalues(), UnitaryMatrix(solver.eigenvectors())};
}

UnitaryMatrix expm_hermitian(const HermitianEigensystem& eig, double t) {
  const ComplexMatrix& v = eig.eigenvectors.matrix();
  ComplexVector phases(eig.eigenvalues.size());
  for (Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::polar(1.0, -eig.eigenvalues[k] * t);
  }
  return UnitaryMatrix(v * phases.asDiagonal() * v.adjoint());
}

UnitaryMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  if (t == 0.0) {
    if (hermiticity_residual(h) > kHermitianTolerance) throw Error("not Hermitian");
    return UnitaryMatrix::identity(h.rows());
  }
  return expm_hermitian(hermitian_eig(h), t);
}

UnitaryMatrix haar_unitary(Index d, Rng& rng) {
  if (d < 1) throw Error("haar_unitary requires d >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix ginibre(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      ginibre(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return UnitaryMatrix(std::move(q));
}

UnitaryMatrix haar_unitary(Index d, RngSeed seed) {
  Rng rng = seed.stream();
  return haar_unitary(d, rng);
}

ComplexVector circulant_diagonalize(std::span<const Complex> first_row) {
  if (first_row.empty()) throw Error("circulant_diagonalize requires a nonempty row");
  std::vector<Complex> in(first_row.begin(), first_row.end());
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return Eigen::Map<const ComplexVector>(out.data(), static_cast<Index>(out.size()));
}

ComplexMatrix circulant_matrix(std::span<const Complex> first_row) {
  const auto m = static_cast<Index>(first_row.size());
  ComplexMatrix c(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      c(j, k) = first_row[static_cast<std::size_t>(((k - j) % m + m) % m)];
    }
  }
  return c;
}

}  // namespace bosonwalk
