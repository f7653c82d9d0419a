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

#include <limits>
#include <numbers>
#include <span>
#include <variant>

#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

// Natural units throughout: hbar = 1, energies in units of the model's
// hopping scale (J, Omega0 or h0) and times in the inverse of that scale.

/// Uniform nearest-neighbour hopping on a ring of `sites` sites.
struct UniformRing {
  Index sites = 2;
  double hopping = 1.0;  // J

  Index dim() const { return sites; }

  void validate() const;
};

/// Where the spin-up sublattice sits relative to the spin-down sublattice as
/// a function of the displacement angle theta.
enum class SublatticeShift {
  /// Up site l lies on down site l + theta/pi: at theta = pi it coincides with
  /// down site l + 1, which is where the right-hopping overlap peaks. The
  /// controllability identities are derived in this frame.
  kFullSite,
  /// Up-sublattice centre at (M + 1)/2 + theta/(2 pi).
  kHalfSite,
};

/// Two state-dependent lattices of `sites` sites each, coupled by microwave
/// driven spin flips. Basis order: all down sites, then all up sites, so
/// (l, down) -> l and (l, up) -> sites + l for l = 0..sites-1.
struct SpinorLatticeModel {
  Index sites = 2;          // M, sites per sublattice
  double rabi = 1.0;        // Omega0
  double lamb_dicke = 0.4;  // eta
  double curvature = 0.1;   // V0
  SublatticeShift shift = SublatticeShift::kFullSite;

  Index dim() const { return 2 * sites; }
  Index down(Index l) const { return l; }
  Index up(Index l) const { return sites + l; }

  /// Omega_L(theta) = Omega0 exp(-(theta / 2 eta)^2)
  double left_coupling(double theta) const;
  /// Omega_R(theta) = Omega0 exp(-((theta - pi) / 2 eta)^2)
  double right_coupling(double theta) const;
  double left_coupling_derivative(double theta) const;
  double right_coupling_derivative(double theta) const;

  /// Centre of the quadratic potential seen by each sublattice, in the
  /// 1-based site coordinate.
  double down_centre() const;
  double up_centre(double theta) const;
  double up_centre_derivative() const;

  void validate() const;
};

/// Defaults: eta = 0.4, V0 = 0.1 Omega0.
SpinorLatticeModel make_spinor_model(Index sites, double rabi = 1.0);

struct ControlBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Open chain of `sites` sites with individually addressed bonds (hx) and
/// sites (hz).
struct GasMicroscopeModel {
  Index sites = 2;
  double hopping_scale = 1.0;  // h0
  ControlBounds hx_bounds;
  ControlBounds hz_bounds;

  Index dim() const { return sites; }
  void validate() const;
};

using LatticeModel = std::variant<UniformRing, SpinorLatticeModel, GasMicroscopeModel>;

ComplexMatrix ring_hamiltonian(const UniformRing& model);

/// Propagator amplitudes g(m) = exp(-i h t)_{j, j+m} for m = 0..M-1, from the
/// Bloch spectrum via FFT.
ComplexVector ring_propagator_offsets(const UniformRing& model, double t);

/// exp(-i h t) for the ring; circulant, assembled from the offset amplitudes.
UnitaryMatrix ring_propagator(const UniformRing& model, double t);

enum class MatrixNorm { kMax, kFrobenius };

/// Band measured on the nonzero pattern of a square matrix. The band is the
/// set of offsets (i - j) mod N in [0, lower] or [N - upper, N - 1].
struct BandSpec {
  double epsilon = 0.0;
  Index lower = 0;  // omega_1
  Index upper = 0;  // omega_2
  Index band = 0;   // lower + upper
  bool cyclic = false;  // the band uses wrap-around offsets
};

struct BandTruncation {
  ComplexMatrix truncated;  // not re-unitarized
  BandSpec spec;
};

/// Smallest (possibly cyclic) band that contains every nonzero entry.
BandSpec measure_band(const ComplexMatrix& a);

/// Zeroes every entry with |a_ij| < epsilon * ||a|| and measures the band of
/// what survives.
BandTruncation band_truncate(const ComplexMatrix& a, double epsilon,
                             MatrixNorm norm = MatrixNorm::kMax);

struct SpinorTerms {
  ComplexMatrix drift;  // H_0
  ComplexMatrix left;   // H_L
  ComplexMatrix right;  // H_R
};

SpinorTerms spinor_terms(const SpinorLatticeModel& model, double theta, double phi);

/// H_0 + H_L + H_R at the given control angles. Angles are wrapped into
/// [0, 2 pi) first.
ComplexMatrix spinor_hamiltonian(const SpinorLatticeModel& model, double theta, double phi);

struct SpinorDerivatives {
  ComplexMatrix d_theta;
  ComplexMatrix d_phi;
};

SpinorDerivatives spinor_hamiltonian_derivatives(const SpinorLatticeModel& model, double theta,
                                                 double phi);

/// hx[l] on bond (l, l+1), hz[l] on site l, hard walls. Throws when a control
/// leaves its bounds, naming the channel.
ComplexMatrix microscope_hamiltonian(const GasMicroscopeModel& model, std::span<const double> hx,
                                     std::span<const double> hz);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double angle);

}  // namespace bosonwalk
