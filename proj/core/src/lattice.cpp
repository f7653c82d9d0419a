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

#include "bosonwalk/lattice.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace bosonwalk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe_bounds(const ControlBounds& b) {
  std::ostringstream s;
  s << "[" << b.lower << ", " << b.upper << "]";
  return s.str();
}

}  // namespace

double wrap_angle(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void UniformRing::validate() const {
  if (sites < 2) throw Error("ring needs at least 2 sites");
  if (!(hopping > 0.0)) throw Error("ring hopping J must be positive");
}

double SpinorLatticeModel::left_coupling(double theta) const {
  const double x = theta / (2.0 * lamb_dicke);
  return rabi * std::exp(-x * x);
}

double SpinorLatticeModel::right_coupling(double theta) const {
  const double x = (theta - kPi) / (2.0 * lamb_dicke);
  return rabi * std::exp(-x * x);
}

double SpinorLatticeModel::left_coupling_derivative(double theta) const {
  return -left_coupling(theta) * theta / (2.0 * lamb_dicke * lamb_dicke);
}

double SpinorLatticeModel::right_coupling_derivative(double theta) const {
  return -right_coupling(theta) * (theta - kPi) / (2.0 * lamb_dicke * lamb_dicke);
}

double SpinorLatticeModel::down_centre() const {
  return (static_cast<double>(sites) + 1.0) / 2.0;
}

double SpinorLatticeModel::up_centre(double theta) const {
  return down_centre() + up_centre_derivative() * theta;
}

double SpinorLatticeModel::up_centre_derivative() const {
  return shift == SublatticeShift::kFullSite ? -1.0 / kPi : 1.0 / kTwoPi;
}

void SpinorLatticeModel::validate() const {
  if (sites < 2) throw Error("spinor lattice needs at least 2 sites per sublattice");
  if (!(rabi > 0.0)) throw Error("spinor Rabi frequency Omega0 must be positive");
  if (!(lamb_dicke > 0.0 && lamb_dicke < 1.0)) {
    throw Error("Lamb-Dicke parameter eta must lie in (0, 1)");
  }
  if (!(curvature >= 0.0)) throw Error("quadratic potential V0 must be nonnegative");
}

SpinorLatticeModel make_spinor_model(Index sites, double rabi) {
  SpinorLatticeModel model;
  model.sites = sites;
  model.rabi = rabi;
  model.lamb_dicke = 0.4;
  model.curvature = 0.1 * rabi;
  model.validate();
  return model;
}

void GasMicroscopeModel::validate() const {
  if (sites < 2) throw Error("microscope chain needs at least 2 sites");
  if (!(hopping_scale > 0.0)) throw Error("microscope hopping scale h0 must be positive");
  if (!hx_bounds.contains(0.0) || !hz_bounds.contains(0.0)) {
    throw Error("microscope control bounds must contain 0");
  }
}

ComplexMatrix ring_hamiltonian(const UniformRing& model) {
  model.validate();
  const Index m = model.sites;
  ComplexMatrix h = ComplexMatrix::Zero(m, m);
  // For M = 2 both bonds join the same pair of sites and add up.
  for (Index l = 0; l < m; ++l) {
    h((l + 1) % m, l) -= model.hopping;
    h(l, (l + 1) % m) -= model.hopping;
  }
  return h;
}

ComplexVector ring_propagator_offsets(const UniformRing& model, double t) {
  model.validate();
  if (t < 0.0) throw Error("ring propagation time must be nonnegative");
  const auto m = static_cast<std::size_t>(model.sites);
  std::vector<Complex> row(m, Complex(0.0));
  row[1 % m] -= model.hopping;
  row[(m - 1) % m] -= model.hopping;
  const ComplexVector energies = circulant_diagonalize(row);

  std::vector<Complex> phases(m);
  for (std::size_t q = 0; q < m; ++q) {
    phases[q] = std::exp(Complex(0.0, -t) * energies[static_cast<Index>(q)].real());
  }
  std::vector<Complex> amplitudes;
  Eigen::FFT<double> fft;
  fft.inv(amplitudes, phases);  // includes the 1/M
  return Eigen::Map<const ComplexVector>(amplitudes.data(), static_cast<Index>(m));
}

UnitaryMatrix ring_propagator(const UniformRing& model, double t) {
  const ComplexVector g = ring_propagator_offsets(model, t);
  return UnitaryMatrix::circulant(std::span<const Complex>(g.data(), g.size()));
}

BandSpec measure_band(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error("band measurement needs a square matrix");
  const Index n = a.rows();
  BandSpec spec;
  if (n == 0) return spec;

  std::vector<bool> occupied(static_cast<std::size_t>(n), false);
  Index linear_lower = 0;
  Index linear_upper = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (a(i, j) == Complex(0.0)) continue;
      occupied[static_cast<std::size_t>(((i - j) % n + n) % n)] = true;
      linear_lower = std::max(linear_lower, i - j);
      linear_upper = std::max(linear_upper, j - i);
    }
  }

  // The cyclic band is an arc of offsets through 0; its complement is the
  // widest gap between occupied offsets.
  std::vector<Index> offsets{0};
  for (Index o = 1; o < n; ++o) {
    if (occupied[static_cast<std::size_t>(o)]) offsets.push_back(o);
  }
  Index best_lower = offsets.back();
  Index best_upper = 0;
  for (std::size_t k = 0; k + 1 < offsets.size(); ++k) {
    const Index lower = offsets[k];
    const Index upper = n - offsets[k + 1];
    if (lower + upper < best_lower + best_upper) {
      best_lower = lower;
      best_upper = upper;
    }
  }

  if (linear_lower + linear_upper <= best_lower + best_upper) {
    spec.lower = linear_lower;
    spec.upper = linear_upper;
    spec.cyclic = false;
  } else {
    spec.lower = best_lower;
    spec.upper = best_upper;
    spec.cyclic = true;
  }
  spec.band = spec.lower + spec.upper;
  return spec;
}

BandTruncation band_truncate(const ComplexMatrix& a, double epsilon, MatrixNorm norm) {
  if (a.rows() != a.cols()) throw Error("band truncation needs a square matrix");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error("band threshold must lie in [0, 1)");
  const double scale = norm == MatrixNorm::kMax ? max_abs(a) : a.norm();
  const double threshold = epsilon * scale;

  BandTruncation out;
  out.truncated = a;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a(i, j)) < threshold) out.truncated(i, j) = Complex(0.0);
    }
  }
  out.spec = measure_band(out.truncated);
  out.spec.epsilon = epsilon;
  return out;
}

SpinorTerms spinor_terms(const SpinorLatticeModel& model, double theta, double phi) {
  model.validate();
  theta = wrap_angle(theta);
  phi = wrap_angle(phi);
  const Index m = model.sites;
  const Index d = model.dim();
  SpinorTerms terms{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d),
                    ComplexMatrix::Zero(d, d)};

  const double down_c = model.down_centre();
  const double up_c = model.up_centre(theta);
  for (Index l = 0; l < m; ++l) {
    const double x = static_cast<double>(l + 1);
    terms.drift(model.down(l), model.down(l)) = model.curvature * (x - down_c) * (x - down_c);
    terms.drift(model.up(l), model.up(l)) = model.curvature * (x - up_c) * (x - up_c);
  }

  const Complex phase = std::polar(1.0, phi);
  const Complex left = 0.5 * model.left_coupling(theta) * phase;
  const Complex right = 0.5 * model.right_coupling(theta) * phase;
  for (Index l = 0; l < m; ++l) {
    terms.left(model.up(l), model.down(l)) += left;
    terms.left(model.down(l), model.up(l)) += std::conj(left);
    const Index next = (l + 1) % m;  // periodic: (M, up) couples to (1, down)
    terms.right(model.up(l), model.down(next)) += right;
    terms.right(model.down(next), model.up(l)) += std::conj(right);
  }
  return terms;
}

ComplexMatrix spinor_hamiltonian(const SpinorLatticeModel& model, double theta, double phi) {
  SpinorTerms t = spinor_terms(model, theta, phi);
  return t.drift + t.left + t.right;
}

SpinorDerivatives spinor_hamiltonian_derivatives(const SpinorLatticeModel& model, double theta,
                                                 double phi) {
  model.validate();
  theta = wrap_angle(theta);
  phi = wrap_angle(phi);
  const Index m = model.sites;
  const Index d = model.dim();
  SpinorDerivatives out{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};

  const double up_c = model.up_centre(theta);
  const double dc = model.up_centre_derivative();
  for (Index l = 0; l < m; ++l) {
    const double x = static_cast<double>(l + 1);
    out.d_theta(model.up(l), model.up(l)) = -2.0 * model.curvature * (x - up_c) * dc;
  }

  const Complex phase = std::polar(1.0, phi);
  const Complex i_unit(0.0, 1.0);
  const Complex dl = 0.5 * model.left_coupling_derivative(theta) * phase;
  const Complex dr = 0.5 * model.right_coupling_derivative(theta) * phase;
  const Complex pl = 0.5 * model.left_coupling(theta) * i_unit * phase;
  const Complex pr = 0.5 * model.right_coupling(theta) * i_unit * phase;
  for (Index l = 0; l < m; ++l) {
    const Index next = (l + 1) % m;
    out.d_theta(model.up(l), model.down(l)) += dl;
    out.d_theta(model.down(l), model.up(l)) += std::conj(dl);
    out.d_theta(model.up(l), model.down(next)) += dr;
    out.d_theta(model.down(next), model.up(l)) += std::conj(dr);
    out.d_phi(model.up(l), model.down(l)) += pl;
    out.d_phi(model.down(l), model.up(l)) += std::conj(pl);
    out.d_phi(model.up(l), model.down(next)) += pr;
    out.d_phi(model.down(next), model.up(l)) += std::conj(pr);
  }
  return out;
}

ComplexMatrix microscope_hamiltonian(const GasMicroscopeModel& model, std::span<const double> hx,
                                     std::span<const double> hz) {
  model.validate();
  const Index m = model.sites;
  if (static_cast<Index>(hx.size()) != m - 1 || static_cast<Index>(hz.size()) != m) {
    std::ostringstream msg;
    msg << "microscope controls need " << m - 1 << " bond and " << m << " site values, got "
        << hx.size() << " and " << hz.size();
    throw Error(msg.str());
  }
  ComplexMatrix h = ComplexMatrix::Zero(m, m);
  for (Index l = 0; l + 1 < m; ++l) {
    const double v = hx[static_cast<std::size_t>(l)];
    if (!model.hx_bounds.contains(v)) {
      std::ostringstream msg;
      msg << "control hx_" << l + 1 << " = " << v << " outside " << describe_bounds(model.hx_bounds);
      throw Error(msg.str());
    }
    h(l, l + 1) = v;
    h(l + 1, l) = v;
  }
  for (Index l = 0; l < m; ++l) {
    const double v = hz[static_cast<std::size_t>(l)];
    if (!model.hz_bounds.contains(v)) {
      std::ostringstream msg;
      msg << "control hz_" << l + 1 << " = " << v << " outside " << describe_bounds(model.hz_bounds);
      throw Error(msg.str());
    }
    h(l, l) = v;
  }
  return h;
}

}  // namespace bosonwalk
