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


#include "bosonwalk/control.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace bosonwalk {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_channels(const LatticeModel& model, const ControlWaveform& wf) {
  const std::vector<std::string> expected = control_channels(model);
  if (wf.channels() == expected) return;
  std::ostringstream msg;
  msg << "waveform channels do not match the model: expected";
  for (const auto& c : expected) msg << ' ' << c;
  msg << ", got";
  for (const auto& c : wf.channels()) msg << ' ' << c;
  throw Error(msg.str());
}

/// (exp(-i a t) - exp(-i b t)) / (a - b), continuous through a = b.
Complex divided_difference(double a, double b, double t) {
  const double x = 0.5 * (a - b) * t;
  const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return Complex(0.0, -t) * std::polar(1.0, -0.5 * (a + b) * t) * sinc;
}

ComplexMatrix step_unitary(const HermitianEigensystem& eig, double dt) {
  const ComplexMatrix& v = eig.eigenvectors.matrix();
  ComplexVector phases(eig.eigenvalues.size());
  for (Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, -eig.eigenvalues[i] * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

HermitianEigensystem checked_eig(const ComplexMatrix& h, Index step) {
  if (!all_finite(h)) {
    std::ostringstream msg;
    msg << "non-finite control Hamiltonian at step " << step;
    throw Error(msg.str());
  }
  return hermitian_eig(h);
}

double fidelity_only(const LatticeModel& model, const ControlWaveform& wf,
                     const UnitaryMatrix& target) {
  return fidelity(propagate(model, wf), target);
}

FidelityEvaluation evaluate_analytic(const LatticeModel& model, const ControlWaveform& wf,
                                     const UnitaryMatrix& target) {
  const Index k_steps = wf.steps();
  const Index channels = wf.channel_count();
  const Index d = target.dim();
  const double dt = wf.dt();

  std::vector<HermitianEigensystem> eigs;
  std::vector<ComplexMatrix> steps;
  eigs.reserve(static_cast<std::size_t>(k_steps));
  steps.reserve(static_cast<std::size_t>(k_steps));
  for (Index k = 0; k < k_steps; ++k) {
    eigs.push_back(checked_eig(step_hamiltonian(model, wf, k), k));
    steps.push_back(step_unitary(eigs.back(), dt));
  }

  // before[k] = U_{k-1} ... U_0, after[k] = U_{K-1} ... U_{k+1}
  std::vector<ComplexMatrix> before(static_cast<std::size_t>(k_steps + 1));
  before[0] = ComplexMatrix::Identity(d, d);
  for (Index k = 0; k < k_steps; ++k) {
    before[static_cast<std::size_t>(k + 1)] = steps[static_cast<std::size_t>(k)] * before[static_cast<std::size_t>(k)];
  }
  std::vector<ComplexMatrix> after(static_cast<std::size_t>(k_steps));
  after[static_cast<std::size_t>(k_steps - 1)] = ComplexMatrix::Identity(d, d);
  for (Index k = k_steps - 1; k > 0; --k) {
    after[static_cast<std::size_t>(k - 1)] = after[static_cast<std::size_t>(k)] * steps[static_cast<std::size_t>(k)];
  }

  const ComplexMatrix& u = before.back();
  const ComplexMatrix target_adj = target.matrix().adjoint();
  const Complex overlap = (target_adj * u).trace();
  const double norm = static_cast<double>(d) * static_cast<double>(d);

  FidelityEvaluation out;
  out.fidelity = std::norm(overlap) / norm;
  out.gradient = RealVector::Zero(k_steps * channels);
  ComplexMatrix gamma(d, d);
  for (Index k = 0; k < k_steps; ++k) {
    const auto& eig = eigs[static_cast<std::size_t>(k)];
    const ComplexMatrix& v = eig.eigenvectors.matrix();
    // d Tr(W^dag U) = Tr(dU_k X) with X = before_k W^dag after_k.
    const ComplexMatrix x =
        before[static_cast<std::size_t>(k)] * target_adj * after[static_cast<std::size_t>(k)];
    const ComplexMatrix y = v.adjoint() * x * v;
    for (Index b = 0; b < d; ++b) {
      for (Index a = 0; a < d; ++a) {
        gamma(a, b) = divided_difference(eig.eigenvalues[a], eig.eigenvalues[b], dt) * y(a, b);
      }
    }
    const ComplexMatrix q_t = (v * gamma * v.adjoint()).transpose();
    const std::vector<ComplexMatrix> dh = step_hamiltonian_derivatives(model, wf, k);
    for (Index c = 0; c < channels; ++c) {
      const Complex dg = dh[static_cast<std::size_t>(c)].cwiseProduct(q_t).sum();
      out.gradient[k * channels + c] = 2.0 * (std::conj(overlap) * dg).real() / norm;
    }
  }
  out.unitary = UnitaryMatrix(u, kReconstructionTolerance);
  return out;
}

FidelityEvaluation evaluate_finite_difference(const LatticeModel& model, const ControlWaveform& wf,
                                              const UnitaryMatrix& target) {
  FidelityEvaluation out;
  out.unitary = propagate(model, wf);
  out.fidelity = fidelity(out.unitary, target);
  const RealVector p = wf.parameters();
  out.gradient = RealVector::Zero(p.size());
  const double h = kFiniteDifferenceStep;
  for (Index i = 0; i < p.size(); ++i) {
    RealVector q = p;
    q[i] = p[i] + h;
    const double plus = fidelity_only(model, wf.with_parameters(q), target);
    q[i] = p[i] - h;
    const double minus = fidelity_only(model, wf.with_parameters(q), target);
    out.gradient[i] = (plus - minus) / (2.0 * h);
  }
  return out;
}

/// Limited-memory inverse-Hessian estimate for minimizing 1 - F.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(int capacity) : capacity_(static_cast<std::size_t>(std::max(capacity, 0))) {}

  void clear() { pairs_.clear(); }
  bool empty() const { return pairs_.empty(); }

  void push(RealVector s, RealVector y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return;
    if (capacity_ == 0) return;
    if (pairs_.size() == capacity_) pairs_.pop_front();
    pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
  }

  /// -H g by the two-loop recursion.
  RealVector direction(const RealVector& g) const {
    RealVector q = g;
    std::vector<double> alpha(pairs_.size());
    for (std::size_t i = pairs_.size(); i-- > 0;) {
      alpha[i] = pairs_[i].rho * pairs_[i].s.dot(q);
      q -= alpha[i] * pairs_[i].y;
    }
    if (!pairs_.empty()) {
      const auto& last = pairs_.back();
      q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const double beta = pairs_[i].rho * pairs_[i].y.dot(q);
      q += (alpha[i] - beta) * pairs_[i].s;
    }
    return -q;
  }

 private:
  struct Pair {
    RealVector s;
    RealVector y;
    double rho;
  };
  std::size_t capacity_;
  std::deque<Pair> pairs_;
};

struct Trial {
  bool ok = false;
  FidelityEvaluation eval;
};

Trial try_evaluate(const LatticeModel& model, const ControlWaveform& wf, const UnitaryMatrix& target,
                   GradientMethod method) {
  Trial t;
  try {
    t.eval = evaluate_fidelity(model, wf, target, method);
    t.ok = std::isfinite(t.eval.fidelity) && t.eval.gradient.allFinite();
  } catch (const Error&) {
    t.ok = false;
  }
  return t;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view to_string(ControlFamily family) {
  return family == ControlFamily::kSpinor ? "spinor" : "microscope";
}

ControlFamily parse_control_family(std::string_view name) {
  if (name == "spinor") return ControlFamily::kSpinor;
  if (name == "microscope") return ControlFamily::kMicroscope;
  throw Error("unknown control family '" + std::string(name) + "' (expected spinor or microscope)");
}

ControlFamily control_family(const LatticeModel& model) {
  if (std::holds_alternative<SpinorLatticeModel>(model)) return ControlFamily::kSpinor;
  if (std::holds_alternative<GasMicroscopeModel>(model)) return ControlFamily::kMicroscope;
  throw Error("the uniform ring has no control channels");
}

std::vector<std::string> control_channels(const LatticeModel& model) {
  if (control_family(model) == ControlFamily::kSpinor) return {"theta", "phi"};
  const Index m = std::get<GasMicroscopeModel>(model).sites;
  std::vector<std::string> names;
  for (Index l = 1; l < m; ++l) names.push_back("hx_" + std::to_string(l));
  for (Index l = 1; l <= m; ++l) names.push_back("hz_" + std::to_string(l));
  return names;
}

ControlWaveform::ControlWaveform(std::vector<std::string> channels, Eigen::MatrixXd values,
                                 double dt)
    : channels_(std::move(channels)), values_(std::move(values)), dt_(dt) {
  if (values_.rows() < 1) throw Error("waveform needs K >= 1 steps");
  if (static_cast<Index>(channels_.size()) != values_.cols()) {
    throw Error("waveform has a different number of channel names and value columns");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error("waveform step duration must be positive");
}

ControlWaveform ControlWaveform::constant(std::vector<std::string> channels, Index steps,
                                          double dt, std::span<const double> levels) {
  if (levels.size() != channels.size()) throw Error("one constant level per channel required");
  Eigen::MatrixXd values(std::max<Index>(steps, 0), static_cast<Index>(channels.size()));
  for (Index c = 0; c < values.cols(); ++c) values.col(c).setConstant(levels[static_cast<std::size_t>(c)]);
  return ControlWaveform(std::move(channels), std::move(values), dt);
}

Index ControlWaveform::channel_index(std::string_view name) const {
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    if (channels_[c] == name) return static_cast<Index>(c);
  }
  throw Error("waveform has no channel '" + std::string(name) + "'");
}

RealVector ControlWaveform::parameters() const {
  RealVector p(values_.size());
  for (Index k = 0; k < steps(); ++k) {
    for (Index c = 0; c < channel_count(); ++c) p[k * channel_count() + c] = values_(k, c);
  }
  return p;
}

ControlWaveform ControlWaveform::with_parameters(const RealVector& p) const {
  if (p.size() != values_.size()) throw Error("parameter vector has the wrong length");
  ControlWaveform out = *this;
  for (Index k = 0; k < steps(); ++k) {
    for (Index c = 0; c < channel_count(); ++c) out.values_(k, c) = p[k * channel_count() + c];
  }
  return out;
}

WaveformShape default_shape(const LatticeModel& model) {
  if (control_family(model) == ControlFamily::kSpinor) {
    const auto& s = std::get<SpinorLatticeModel>(model);
    s.validate();
    return {s.dim() * s.dim(), kTwoPi / s.rabi};
  }
  const auto& g = std::get<GasMicroscopeModel>(model);
  g.validate();
  return {g.sites, kTwoPi / g.hopping_scale};
}

ComplexMatrix step_hamiltonian(const LatticeModel& model, const ControlWaveform& wf, Index step) {
  check_channels(model, wf);
  if (step < 0 || step >= wf.steps()) throw Error("step index out of range");
  if (const auto* s = std::get_if<SpinorLatticeModel>(&model)) {
    return spinor_hamiltonian(*s, wf(step, 0), wf(step, 1));
  }
  const auto& g = std::get<GasMicroscopeModel>(model);
  const Index m = g.sites;
  std::vector<double> hx(static_cast<std::size_t>(m - 1));
  std::vector<double> hz(static_cast<std::size_t>(m));
  for (Index l = 0; l + 1 < m; ++l) hx[static_cast<std::size_t>(l)] = wf(step, l);
  for (Index l = 0; l < m; ++l) hz[static_cast<std::size_t>(l)] = wf(step, m - 1 + l);
  try {
    return microscope_hamiltonian(g, hx, hz);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " at step " + std::to_string(step));
  }
}

std::vector<ComplexMatrix> step_hamiltonian_derivatives(const LatticeModel& model,
                                                        const ControlWaveform& wf, Index step) {
  check_channels(model, wf);
  if (step < 0 || step >= wf.steps()) throw Error("step index out of range");
  if (const auto* s = std::get_if<SpinorLatticeModel>(&model)) {
    SpinorDerivatives d = spinor_hamiltonian_derivatives(*s, wf(step, 0), wf(step, 1));
    return {std::move(d.d_theta), std::move(d.d_phi)};
  }
  const Index m = std::get<GasMicroscopeModel>(model).sites;
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(2 * m - 1));
  for (Index l = 0; l + 1 < m; ++l) {
    ComplexMatrix d = ComplexMatrix::Zero(m, m);
    d(l, l + 1) = 1.0;
    d(l + 1, l) = 1.0;
    out.push_back(std::move(d));
  }
  for (Index l = 0; l < m; ++l) {
    ComplexMatrix d = ComplexMatrix::Zero(m, m);
    d(l, l) = 1.0;
    out.push_back(std::move(d));
  }
  return out;
}

UnitaryMatrix propagate(const LatticeModel& model, const ControlWaveform& wf) {
  check_channels(model, wf);
  ComplexMatrix u;
  for (Index k = 0; k < wf.steps(); ++k) {
    const ComplexMatrix step = step_unitary(checked_eig(step_hamiltonian(model, wf, k), k), wf.dt());
    u = k == 0 ? step : ComplexMatrix(step * u);
  }
  return UnitaryMatrix(std::move(u), kReconstructionTolerance);
}

double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& target) {
  if (u.dim() != target.dim()) {
    std::ostringstream msg;
    msg << "fidelity between unitaries of dimension " << u.dim() << " and " << target.dim();
    throw Error(msg.str());
  }
  const double d = static_cast<double>(u.dim());
  return std::norm((target.matrix().adjoint() * u.matrix()).trace()) / (d * d);
}

std::string_view to_string(GradientMethod method) {
  return method == GradientMethod::kAnalytic ? "analytic" : "finite_difference";
}

GradientMethod parse_gradient_method(std::string_view name) {
  if (name == "analytic") return GradientMethod::kAnalytic;
  if (name == "finite_difference") return GradientMethod::kFiniteDifference;
  throw Error("unknown gradient method '" + std::string(name) +
              "' (expected analytic or finite_difference)");
}

FidelityEvaluation evaluate_fidelity(const LatticeModel& model, const ControlWaveform& wf,
                                     const UnitaryMatrix& target, GradientMethod method) {
  check_channels(model, wf);
  const Index d = std::visit([](const auto& m) { return static_cast<Index>(m.dim()); }, model);
  if (d != target.dim()) {
    std::ostringstream msg;
    msg << "target has dimension " << target.dim() << " but the model has " << d;
    throw Error(msg.str());
  }
  return method == GradientMethod::kAnalytic ? evaluate_analytic(model, wf, target)
                                             : evaluate_finite_difference(model, wf, target);
}

RealVector fidelity_gradient(const LatticeModel& model, const ControlWaveform& wf,
                             const UnitaryMatrix& target, GradientMethod method) {
  return evaluate_fidelity(model, wf, target, method).gradient;
}

void GrapeConfig::validate() const {
  if (max_iterations < 1) throw Error("max_iterations must be >= 1");
  if (!(initial_step > 0.0)) throw Error("initial_step must be positive");
  if (!(backtracking > 0.0 && backtracking < 1.0)) throw Error("backtracking must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw Error("armijo must lie in (0, 1)");
  if (max_backtracks < 1) throw Error("max_backtracks must be >= 1");
  if (memory < 0) throw Error("memory must be nonnegative");
  if (!(target_infidelity > 0.0)) throw Error("target_infidelity must be positive");
  if (!(gradient_tolerance > 0.0)) throw Error("gradient_tolerance must be positive");
  if (!(convergence_threshold > 0.0)) throw Error("convergence_threshold must be positive");
  if (stall_iterations < 1) throw Error("stall_iterations must be >= 1");
  if (!(perturbation >= 0.0)) throw Error("perturbation must be nonnegative");
  if (steps && *steps < 1) throw Error("steps must be >= 1");
  if (dt && !(*dt > 0.0)) throw Error("dt must be positive");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kTargetReached:
      return "target_reached";
    case StopReason::kGradientVanished:
      return "gradient_vanished";
    case StopReason::kStalled:
      return "stalled";
    case StopReason::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

std::vector<double> default_initial_levels(const LatticeModel& model) {
  if (control_family(model) == ControlFamily::kSpinor) return {std::numbers::pi / 2.0, 0.0};
  const auto& g = std::get<GasMicroscopeModel>(model);
  std::vector<double> levels(static_cast<std::size_t>(2 * g.sites - 1), 0.0);
  std::fill(levels.begin(), levels.begin() + (g.sites - 1), g.hopping_scale);
  return levels;
}

ControlWaveform initial_waveform(const LatticeModel& model, const GrapeConfig& config) {
  config.validate();
  const WaveformShape shape = default_shape(model);
  const Index steps = config.steps.value_or(shape.steps);
  const double dt = config.dt.value_or(shape.dt);
  std::vector<double> levels =
      config.initial_levels.empty() ? default_initial_levels(model) : config.initial_levels;
  ControlWaveform wf = ControlWaveform::constant(control_channels(model), steps, dt, levels);
  if (config.perturbation == 0.0) return wf;
  Rng rng(config.seed);
  std::normal_distribution<double> normal(0.0, config.perturbation);
  RealVector p = wf.parameters();
  for (Index i = 0; i < p.size(); ++i) p[i] += normal(rng);
  return wf.with_parameters(p);
}

GrapeResult grape_optimize(const LatticeModel& model, const UnitaryMatrix& target,
                           const GrapeConfig& config) {
  return grape_optimize(model, target, config, initial_waveform(model, config));
}

GrapeResult grape_optimize(const LatticeModel& model, const UnitaryMatrix& target,
                           const GrapeConfig& config, const ControlWaveform& initial) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  ControlWaveform wf = initial;
  FidelityEvaluation current;
  try {
    current = evaluate_fidelity(model, wf, target, config.gradient);
  } catch (const Error& e) {
    throw Error(std::string("iteration 0: ") + e.what());
  }
  if (!std::isfinite(current.fidelity) || !current.gradient.allFinite()) {
    throw Error("non-finite fidelity at iteration 0");
  }

  std::vector<double> trace{current.fidelity};
  LbfgsMemory memory(config.memory);
  StopReason reason = StopReason::kMaxIterations;
  int stalled = 0;
  int iteration = 0;
  for (; iteration < config.max_iterations; ++iteration) {
    if (1.0 - current.fidelity <= config.target_infidelity) {
      reason = StopReason::kTargetReached;
      break;
    }
    // Minimize f = 1 - F, so the descent gradient is -dF.
    const RealVector g = -current.gradient;
    if (g.norm() < config.gradient_tolerance) {
      reason = StopReason::kGradientVanished;
      break;
    }
    const RealVector x = wf.parameters();

    bool accepted = false;
    Trial trial;
    double alpha = 0.0;
    RealVector p;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool steepest = memory.empty();
      p = steepest ? RealVector(-g) : memory.direction(g);
      double slope = g.dot(p);
      if (!(slope < 0.0)) {
        memory.clear();
        p = -g;
        slope = g.dot(p);
      }
      alpha = memory.empty() ? config.initial_step / std::max(1.0, g.lpNorm<Eigen::Infinity>())
                             : config.initial_step;
      for (int b = 0; b < config.max_backtracks; ++b, alpha *= config.backtracking) {
        trial = try_evaluate(model, wf.with_parameters(x + alpha * p), target, config.gradient);
        if (!trial.ok) continue;
        const double f_old = 1.0 - current.fidelity;
        const double f_new = 1.0 - trial.eval.fidelity;
        if (f_new <= f_old + config.armijo * alpha * slope && trial.eval.fidelity >= current.fidelity) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (memory.empty()) break;
        memory.clear();
      }
    }
    if (!accepted) {
      reason = StopReason::kStalled;
      break;
    }

    const RealVector x_new = x + alpha * p;
    memory.push(x_new - x, -trial.eval.gradient - g);
    const double gain = trial.eval.fidelity - current.fidelity;
    wf = wf.with_parameters(x_new);
    current = std::move(trial.eval);
    trace.push_back(current.fidelity);

    stalled = gain < config.convergence_threshold ? stalled + 1 : 0;
    if (stalled >= config.stall_iterations) {
      ++iteration;
      reason = 1.0 - current.fidelity <= config.target_infidelity ? StopReason::kTargetReached
                                                                   : StopReason::kStalled;
      break;
    }
  }
  if (iteration == config.max_iterations && 1.0 - current.fidelity <= config.target_infidelity) {
    reason = StopReason::kTargetReached;
  }

  GrapeResult result{
      .waveform = std::move(wf),
      .fidelity_trace = std::move(trace),
      .infidelity = std::max(0.0, 1.0 - current.fidelity),
      .unitary = std::move(current.unitary),
      .iterations = 0,
      .wall_seconds = 0.0,
      .reason = reason,
  };
  result.iterations = static_cast<int>(result.fidelity_trace.size()) - 1;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

LatticeModel model_for_dimension(ControlFamily family, Index d) {
  if (family == ControlFamily::kSpinor) {
    if (d < 4 || d % 2 != 0) {
      std::ostringstream msg;
      msg << "spinor dimension must be even and >= 4 (d = 2M), got " << d;
      throw Error(msg.str());
    }
    return make_spinor_model(d / 2);
  }
  if (d < 2) throw Error("microscope dimension must be >= 2");
  GasMicroscopeModel g;
  g.sites = d;
  return g;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

ScanTable infidelity_scan(ControlFamily family, std::span<const Index> dims, int targets_per_dim,
                          const GrapeConfig& config, const ScanOptions& options) {
  if (targets_per_dim < 1) throw Error("targets_per_dim must be >= 1");
  config.validate();
  ScanTable table;
  for (Index d : dims) {
    model_for_dimension(family, d);  // validates d up front
    for (int t = 0; t < targets_per_dim; ++t) {
      ScanEntry e;
      e.dim = d;
      e.target = t;
      e.target_seed = derive_seed(options.seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(t));
      table.entries.push_back(e);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  std::atomic<bool> out_of_time{false};
  detail::parallel_for(
      table.entries.size(),
      [&](std::size_t i) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out_of_time.load() || elapsed > options.time_budget_seconds) {
          out_of_time.store(true);
          return;
        }
        ScanEntry& e = table.entries[i];
        const LatticeModel model = model_for_dimension(family, e.dim);
        const UnitaryMatrix target = haar_unitary(e.dim, RngSeed{e.target_seed});
        GrapeConfig run = config;
        run.seed = derive_seed(e.target_seed, 0x67726170ull, 0);
        const GrapeResult r = grape_optimize(model, target, run);
        e.infidelity = r.infidelity;
        e.iterations = r.iterations;
        e.reason = r.reason;
        e.completed = true;
      },
      options.threads);

  for (Index d : dims) {
    std::vector<double> values;
    for (const ScanEntry& e : table.entries) {
      if (e.dim == d && e.completed) values.push_back(e.infidelity);
    }
    ScanRow row;
    row.dim = d;
    row.completed = static_cast<int>(values.size());
    if (!values.empty()) {
      const double n = static_cast<double>(values.size());
      double sum = 0.0;
      for (double v : values) sum += v;
      row.mean = sum / n;
      double sq = 0.0;
      for (double v : values) sq += (v - row.mean) * (v - row.mean);
      row.stddev = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
      row.min = *std::min_element(values.begin(), values.end());
      row.max = *std::max_element(values.begin(), values.end());
      row.median = median_of(values);
    }
    if (row.completed < targets_per_dim) table.partial = true;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bosonwalk
