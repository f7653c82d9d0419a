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


#include "bosonwalk/controllability.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bosonwalk/control.hpp"

namespace bosonwalk {
namespace {

constexpr double kDuplicateTolerance = 1e-10;

/// Real coordinates of a Hermitian matrix in which the Euclidean dot product
/// equals Tr(A B): diagonal entries, then sqrt(2) Re and sqrt(2) Im of the
/// strict upper triangle.
RealVector vectorize(const ComplexMatrix& h) {
  const Index d = h.rows();
  RealVector v(d * d);
  Index n = 0;
  for (Index i = 0; i < d; ++i) v[n++] = h(i, i).real();
  for (Index j = 1; j < d; ++j) {
    for (Index i = 0; i < j; ++i) {
      v[n++] = std::numbers::sqrt2 * h(i, j).real();
      v[n++] = std::numbers::sqrt2 * h(i, j).imag();
    }
  }
  return v;
}

ComplexMatrix unvectorize(const RealVector& v, Index d) {
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  Index n = 0;
  for (Index i = 0; i < d; ++i) h(i, i) = v[n++];
  for (Index j = 1; j < d; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double re = v[n++] / std::numbers::sqrt2;
      const double im = v[n++] / std::numbers::sqrt2;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

double trace_norm(const ComplexMatrix& a) {
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues().sum();
}

/// Orthonormal real basis grown one candidate at a time.
class SpanBuilder {
 public:
  explicit SpanBuilder(Index d) : d_(d) {}

  Index size() const { return static_cast<Index>(vectors_.size()); }
  const ComplexMatrix& matrix(Index i) const { return matrices_[static_cast<std::size_t>(i)]; }

  bool try_add(const ComplexMatrix& h) {
    RealVector v = vectorize(h);
    const double norm = v.norm();
    if (!(norm > 0.0)) return false;
    v /= norm;
    if (residual_norm(v) <= kClosureRankTolerance) return false;
    v.normalize();
    matrices_.push_back(unvectorize(v, d_));
    vectors_.push_back(std::move(v));
    return true;
  }

  /// Norm of what is left of a unit vector after projecting out the span;
  /// the vector is overwritten with that remainder.
  double residual_norm(RealVector& v) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (const RealVector& q : vectors_) v -= q.dot(v) * q;
    }
    return v.norm();
  }

  bool contains_identity() const {
    RealVector u = vectorize(ComplexMatrix::Identity(d_, d_));
    u.normalize();
    return residual_norm(u) <= kClosureRankTolerance;
  }

  /// Rank of the span after removing the identity component from every
  /// basis element.
  Index traceless_rank() const {
    const Index n = d_ * d_;
    RealVector u = vectorize(ComplexMatrix::Identity(d_, d_));
    u.normalize();
    Eigen::MatrixXd b(n, size());
    for (Index i = 0; i < size(); ++i) {
      const RealVector& q = vectors_[static_cast<std::size_t>(i)];
      b.col(i) = q - u.dot(q) * u;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
    qr.setThreshold(kClosureRankTolerance);
    return qr.rank();
  }

 private:
  Index d_;
  std::vector<RealVector> vectors_;
  std::vector<ComplexMatrix> matrices_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix projector(Index d, Index l) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(l, l) = 1.0;
  return p;
}

ComplexMatrix sigma_x() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

ComplexMatrix sigma_z() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = -1.0;  // down
  s(1, 1) = 1.0;   // up
  return s;
}

std::string format_label(std::string_view head, const std::vector<std::string>& names,
                         const std::vector<double>& values) {
  std::ostringstream out;
  out << head << '(';
  bool first = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (first ? "" : ",") << names[i] << '=' << values[i];
    first = false;
  }
  out << ')';
  return out.str();
}

}  // namespace

void GeneratorSet::add(ComplexMatrix h, std::string label) {
  if (h.rows() != h.cols()) throw Error("generator " + label + " is not square");
  if (!empty() && h.rows() != dim()) {
    std::ostringstream msg;
    msg << "generator " << label << " has dimension " << h.rows() << ", expected " << dim();
    throw Error(msg.str());
  }
  if (!all_finite(h) || hermiticity_residual(h) > kHermitianTolerance) {
    throw Error("generator " + label + " is not Hermitian");
  }
  generators_.push_back(std::move(h));
  labels_.push_back(std::move(label));
}

GellMannBasis::GellMannBasis(Index m) : m_(m) {
  if (m < 1) throw Error("Gell-Mann basis needs M >= 1");
}

ComplexMatrix GellMannBasis::x(Index j, Index k) const { return phi(j, k, 0.0); }

ComplexMatrix GellMannBasis::y(Index j, Index k) const {
  return phi(j, k, std::numbers::pi / 2.0);
}

ComplexMatrix GellMannBasis::phi(Index j, Index k, double phase) const {
  if (j < 0 || k < 0 || j >= m_ || k >= m_ || j == k) throw Error("Gell-Mann pair out of range");
  ComplexMatrix g = ComplexMatrix::Zero(m_, m_);
  g(j, k) = std::polar(1.0, -phase);
  g(k, j) = std::polar(1.0, phase);
  return g;
}

ComplexMatrix GellMannBasis::z(Index l) const {
  if (l < 0 || l >= m_ - 1) throw Error("Gell-Mann diagonal index out of range");
  const double lf = static_cast<double>(l + 1);
  const double scale = std::sqrt(2.0 / (lf * (lf + 1.0)));
  ComplexMatrix g = ComplexMatrix::Zero(m_, m_);
  for (Index i = 0; i <= l; ++i) g(i, i) = scale;
  g(l + 1, l + 1) = -lf * scale;
  return g;
}

std::vector<ComplexMatrix> GellMannBasis::elements() const {
  std::vector<ComplexMatrix> out;
  for (Index j = 0; j < m_; ++j) {
    for (Index k = j + 1; k < m_; ++k) out.push_back(x(j, k));
  }
  for (Index j = 0; j < m_; ++j) {
    for (Index k = j + 1; k < m_; ++k) out.push_back(y(j, k));
  }
  for (Index l = 0; l + 1 < m_; ++l) out.push_back(z(l));
  return out;
}

ControlGrid canonical_grid(const LatticeModel& model) {
  ControlGrid grid;
  if (control_family(model) == ControlFamily::kSpinor) {
    for (double theta : {0.0, std::numbers::pi / 2.0, std::numbers::pi}) {
      for (double phi : {0.0, std::numbers::pi / 2.0}) grid.push_back({theta, phi});
    }
    return grid;
  }
  const std::size_t channels = control_channels(model).size();
  for (std::size_t c = 0; c < channels; ++c) {
    std::vector<double> point(channels, 0.0);
    point[c] = 1.0;
    grid.push_back(std::move(point));
  }
  return grid;
}

GeneratorSet sample_generators(const LatticeModel& model, const ControlGrid& grid) {
  if (grid.empty()) throw Error("control grid is empty");
  const std::vector<std::string> names = control_channels(model);
  const bool spinor = control_family(model) == ControlFamily::kSpinor;
  GeneratorSet set;
  for (const auto& point : grid) {
    if (point.size() != names.size()) throw Error("grid point has the wrong number of channels");
    Eigen::MatrixXd values(1, static_cast<Index>(point.size()));
    for (std::size_t c = 0; c < point.size(); ++c) values(0, static_cast<Index>(c)) = point[c];
    const ControlWaveform wf(names, values, 1.0);
    ComplexMatrix h = step_hamiltonian(model, wf, 0);

    bool duplicate = false;
    for (const auto& g : set.generators()) {
      if (trace_norm(h - g) <= kDuplicateTolerance) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    std::string label;
    if (!spinor) {
      // Unit vectors are labelled by their single active channel.
      std::size_t active = 0;
      std::size_t nonzero = 0;
      for (std::size_t c = 0; c < point.size(); ++c) {
        if (point[c] != 0.0) {
          active = c;
          ++nonzero;
        }
      }
      if (nonzero == 1 && point[active] == 1.0) label = names[active];
    }
    if (label.empty()) label = format_label("H", names, point);
    set.add(std::move(h), std::move(label));
  }
  return set;
}

ClosureResult lie_closure_dimension(const GeneratorSet& gens, Index max_dim) {
  if (gens.empty()) throw Error("closure needs at least one generator");
  const Index d = gens.dim();
  if (d * d > kClosureDimLimit) {
    std::ostringstream msg;
    msg << "closure guard: d^2 = " << d * d << " exceeds " << kClosureDimLimit;
    throw Error(msg.str());
  }
  max_dim = std::min(max_dim, d * d);

  ClosureResult result;
  SpanBuilder span(d);
  for (const auto& g : gens.generators()) {
    if (span.size() >= max_dim) break;
    span.try_add(g);
  }
  result.round_dimensions.push_back(span.size());

  Index frontier = 0;
  while (span.size() < max_dim) {
    const Index end = span.size();
    for (Index a = frontier; a < end && span.size() < max_dim; ++a) {
      for (Index b = 0; b < end && span.size() < max_dim; ++b) {
        if (b >= frontier && b <= a) continue;  // each frontier pair once
        // For Hermitian A, B the bracket [iA, iB] corresponds to i[A, B].
        span.try_add(Complex(0.0, 1.0) * commutator(span.matrix(a), span.matrix(b)));
      }
    }
    if (span.size() == end) break;
    frontier = end;
    result.round_dimensions.push_back(span.size());
  }

  result.dimension = span.size();
  result.hit_max_dim = span.size() >= max_dim && max_dim < d * d;
  result.contains_identity = span.contains_identity();
  result.saturated = result.dimension >= d * d - 1 && span.traceless_rank() == d * d - 1;
  return result;
}

bool IdentityReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

IdentityCheck proportionality(std::string name, std::string claimed, const ComplexMatrix& c,
                              const ComplexMatrix& o, double tolerance) {
  IdentityCheck check;
  check.name = std::move(name);
  check.claimed = std::move(claimed);
  const double cn = c.norm();
  const double on = o.norm();
  if (cn == 0.0 && on == 0.0) {
    check.residual = 0.0;
  } else if (cn == 0.0 || on == 0.0) {
    check.residual = 1.0;
  } else {
    check.constant = (o.adjoint() * c).trace() / (on * on);
    check.residual = (c - check.constant * o).norm() / cn;
  }
  check.passed = check.residual <= tolerance;
  return check;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

IdentityReport verify_appendix_identities(Index sites, double tolerance) {
  if (sites < 2 || sites > 6) throw Error("identity checks need 2 <= M <= 6");
  const Index m = sites;
  constexpr double pi = std::numbers::pi;
  const SpinorLatticeModel model = make_spinor_model(m);
  const GellMannBasis gm(m);
  const ComplexMatrix one_site = ComplexMatrix::Identity(m, m);
  const ComplexMatrix sz = sigma_z();
  const Index last = m - 1;

  IdentityReport report;
  report.sites = m;
  report.tolerance = tolerance;

  {
    const SpinorTerms t = spinor_terms(model, pi / 2.0, 0.0);
    ComplexMatrix claimed = ComplexMatrix::Zero(2 * m, 2 * m);
    for (Index l = 0; l < m; ++l) claimed += kron(sz, gm.y((l + 1) % m, l));
    report.checks.push_back(proportionality("[H_L, H_R]", "sum_l G_y^{l+1,l} (x) sigma_z",
                                            commutator(t.left, t.right), claimed, tolerance));
  }
  {
    const SpinorTerms a = spinor_terms(model, 0.0, 0.0);
    const SpinorTerms b = spinor_terms(model, 0.0, pi / 2.0);
    report.checks.push_back(proportionality("[H_L(phi=0), H_L(phi=pi/2)] at theta=0",
                                            "1 (x) sigma_z", commutator(a.left, b.left),
                                            kron(sz, one_site), tolerance));
  }
  {
    const SpinorTerms t = spinor_terms(model, pi, 0.0);
    const ComplexMatrix c = commutator(t.left, commutator(t.right, t.drift));
    report.checks.push_back(proportionality("[H_L, [H_R, H_0]] at theta=pi",
                                            "G_x^{M,1} (x) sigma_z", c,
                                            kron(sz, gm.x(0, last)), tolerance));
  }
  {
    // H_0(pi) - H_0(0) acts on the up sublattice only: Z (x) P_up.
    const ComplexMatrix z_up = spinor_terms(model, pi, 0.0).drift - spinor_terms(model, 0.0, 0.0).drift;
    const ComplexMatrix z = z_up.block(m, m, m, m);
    const ComplexMatrix sx = kron(sigma_x(), one_site);
    report.checks.push_back(proportionality("[[H_0(pi) - H_0(0), 1 (x) sigma_x], 1 (x) sigma_x]",
                                            "Z (x) sigma_z", commutator(commutator(z_up, sx), sx),
                                            kron(sz, z), tolerance));
  }
  {
    const ComplexMatrix gx = kron(sz, gm.x(last, 0));
    const ComplexMatrix gy = kron(sz, gm.y(last, 0));
    const ComplexMatrix ends = projector(m, 0) - projector(m, last);
    report.checks.push_back(proportionality("[G_x^{M,1} (x) sigma_z, G_y^{M,1} (x) sigma_z]",
                                            "(|1><1| - |M><M|) (x) 1", commutator(gx, gy),
                                            kron(ComplexMatrix::Identity(2, 2), ends), tolerance));
  }

  GasMicroscopeModel microscope;
  microscope.sites = m;
  for (Index l = 0; l + 1 < m; ++l) {
    std::vector<double> hx(static_cast<std::size_t>(m - 1), 0.0);
    std::vector<double> hz(static_cast<std::size_t>(m), 0.0);
    hx[static_cast<std::size_t>(l)] = 1.0;
    const ComplexMatrix bond = microscope_hamiltonian(microscope, hx, hz);
    std::fill(hx.begin(), hx.end(), 0.0);
    hz[static_cast<std::size_t>(l)] = 1.0;
    const ComplexMatrix site = microscope_hamiltonian(microscope, hx, hz);
    std::ostringstream name;
    name << "microscope [G_x^{" << l + 1 << ',' << l + 2 << "}, |" << l + 1 << "><" << l + 1 << "|]";
    report.checks.push_back(proportionality(name.str(), "G_y^{l,l+1}", commutator(bond, site),
                                            gm.y(l, l + 1), tolerance));
  }
  return report;
}

}  // namespace bosonwalk
