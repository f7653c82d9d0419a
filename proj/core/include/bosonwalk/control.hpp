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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bosonwalk/lattice.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

enum class ControlFamily { kSpinor, kMicroscope };

std::string_view to_string(ControlFamily family);
ControlFamily parse_control_family(std::string_view name);

/// Family of a controllable model; throws for the uniform ring.
ControlFamily control_family(const LatticeModel& model);

/// Channel names in canonical order: {"theta", "phi"} for the spinor model,
/// {"hx_1", ..., "hx_{M-1}", "hz_1", ..., "hz_M"} for the microscope.
std::vector<std::string> control_channels(const LatticeModel& model);

/// Piecewise-constant controls: values(k, c) is channel c during step k.
class ControlWaveform {
 public:
  ControlWaveform(std::vector<std::string> channels, Eigen::MatrixXd values, double dt);

  /// Every channel held at `levels[c]` for all `steps` steps.
  static ControlWaveform constant(std::vector<std::string> channels, Index steps, double dt,
                                  std::span<const double> levels);

  Index steps() const { return values_.rows(); }
  Index channel_count() const { return values_.cols(); }
  double dt() const { return dt_; }
  double duration() const { return dt_ * static_cast<double>(steps()); }
  const std::vector<std::string>& channels() const { return channels_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index step, Index channel) const { return values_(step, channel); }

  /// Index of a named channel; throws when absent.
  Index channel_index(std::string_view name) const;

  /// Parameters in step-major order: p[k * channels + c] = values(k, c).
  RealVector parameters() const;
  ControlWaveform with_parameters(const RealVector& p) const;

  bool operator==(const ControlWaveform&) const = default;

 private:
  std::vector<std::string> channels_;
  Eigen::MatrixXd values_;
  double dt_;
};

struct WaveformShape {
  Index steps = 1;
  double dt = 1.0;
};

/// Spinor: K = d^2 steps with Omega0 dt = 2 pi. Microscope: K = M steps with
/// h0 dt = 2 pi.
WaveformShape default_shape(const LatticeModel& model);

/// Control Hamiltonian during step k.
ComplexMatrix step_hamiltonian(const LatticeModel& model, const ControlWaveform& wf, Index step);

/// dH/d(values(step, c)) for every channel c.
std::vector<ComplexMatrix> step_hamiltonian_derivatives(const LatticeModel& model,
                                                        const ControlWaveform& wf, Index step);

/// U = U_K ... U_2 U_1 with U_k = exp(-i H_k dt).
UnitaryMatrix propagate(const LatticeModel& model, const ControlWaveform& wf);

/// |Tr(target^dagger u)|^2 / d^2
double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& target);

enum class GradientMethod { kAnalytic, kFiniteDifference };

std::string_view to_string(GradientMethod method);
GradientMethod parse_gradient_method(std::string_view name);

inline constexpr double kFiniteDifferenceStep = 1e-6;

struct FidelityEvaluation {
  double fidelity = 0.0;
  RealVector gradient;  // parameters() order
  UnitaryMatrix unitary = UnitaryMatrix::identity(1);
};

FidelityEvaluation evaluate_fidelity(const LatticeModel& model, const ControlWaveform& wf,
                                     const UnitaryMatrix& target,
                                     GradientMethod method = GradientMethod::kAnalytic);

/// dF/d(values(k, c)) in parameters() order.
RealVector fidelity_gradient(const LatticeModel& model, const ControlWaveform& wf,
                             const UnitaryMatrix& target,
                             GradientMethod method = GradientMethod::kAnalytic);

struct GrapeConfig {
  int max_iterations = 2000;
  double initial_step = 1.0;     // trial step length before backtracking
  double backtracking = 0.5;     // step shrink factor
  double armijo = 1e-4;          // sufficient-increase constant
  int max_backtracks = 50;
  int memory = 12;               // L-BFGS history length
  GradientMethod gradient = GradientMethod::kAnalytic;
  double target_infidelity = 1e-6;
  double gradient_tolerance = 1e-10;
  /// Stop once `stall_iterations` consecutive steps each raise F by less
  /// than this.
  double convergence_threshold = 1e-13;
  int stall_iterations = 50;
  std::uint64_t seed = 0;

  // Initial guess: per-channel constants (family default when empty) plus a
  // seeded Gaussian perturbation of this amplitude.
  std::vector<double> initial_levels;
  double perturbation = 1e-2;

  // Override default_shape().
  std::optional<Index> steps;
  std::optional<double> dt;

  void validate() const;
};

enum class StopReason { kTargetReached, kGradientVanished, kStalled, kMaxIterations };

std::string_view to_string(StopReason reason);

struct GrapeResult {
  ControlWaveform waveform;
  std::vector<double> fidelity_trace;  // entry 0 is the initial guess
  double infidelity = 1.0;
  UnitaryMatrix unitary = UnitaryMatrix::identity(1);
  int iterations = 0;
  double wall_seconds = 0.0;
  StopReason reason = StopReason::kMaxIterations;

  bool converged() const { return reason == StopReason::kTargetReached; }
};

/// Per-channel constants used when GrapeConfig::initial_levels is empty:
/// theta = pi/2, phi = 0; hx = h0, hz = 0.
std::vector<double> default_initial_levels(const LatticeModel& model);

ControlWaveform initial_waveform(const LatticeModel& model, const GrapeConfig& config);

GrapeResult grape_optimize(const LatticeModel& model, const UnitaryMatrix& target,
                           const GrapeConfig& config);

/// Starts from `initial` exactly, with no perturbation.
GrapeResult grape_optimize(const LatticeModel& model, const UnitaryMatrix& target,
                           const GrapeConfig& config, const ControlWaveform& initial);

/// Model of Hilbert-space dimension d: spinor with M = d/2 (d must be even),
/// microscope with M = d.
LatticeModel model_for_dimension(ControlFamily family, Index d);

struct ScanOptions {
  std::uint64_t seed = 0;
  double time_budget_seconds = std::numeric_limits<double>::infinity();
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ScanEntry {
  Index dim = 0;
  int target = 0;
  std::uint64_t target_seed = 0;
  bool completed = false;
  double infidelity = 1.0;
  int iterations = 0;
  StopReason reason = StopReason::kMaxIterations;
};

struct ScanRow {
  Index dim = 0;
  int completed = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  std::vector<ScanEntry> entries;  // dims major, targets minor
  bool partial = false;            // budget ran out before every entry finished
};

/// Optimizes `targets_per_dim` Haar targets at each dimension. Target and
/// initial-guess seeds derive from options.seed, dim and target index only.
ScanTable infidelity_scan(ControlFamily family, std::span<const Index> dims, int targets_per_dim,
                          const GrapeConfig& config, const ScanOptions& options = {});

/// Deterministic 64-bit mix used to derive per-run seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace bosonwalk
