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

#include "bosonwalk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "bosonwalk/permanent.hpp"
#include "parallel.hpp"

namespace bosonwalk {
namespace {

void enumerate_into(std::vector<int>& prefix, Index mode, int remaining,
                    std::vector<FockState>& out) {
  const auto modes = static_cast<Index>(prefix.size());
  if (mode == modes - 1) {
    prefix[static_cast<std::size_t>(mode)] = remaining;
    out.emplace_back(prefix);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    prefix[static_cast<std::size_t>(mode)] = n;
    enumerate_into(prefix, mode + 1, remaining - n, out);
  }
}

void check_same_basis(const FockDistribution& p, const FockDistribution& q) {
  if (p.modes() != q.modes() || p.particles() != q.particles() || p.size() != q.size()) {
    throw Error("distributions are defined over different Fock bases");
  }
}

std::vector<double> permanent_weights(const ComplexMatrix& lambda,
                                      const std::vector<FockState>& basis,
                                      const FockState& n_in) {
  std::vector<double> weights(basis.size());
  detail::parallel_for(basis.size(), [&](std::size_t i) {
    weights[i] = transition_weight(lambda, n_in, basis[i]);
  });
  return weights;
}

}  // namespace

std::uint64_t fock_basis_size(Index modes, int particles) {
  if (modes < 1 || particles < 0) return 0;
  // C(N + M - 1, N) built as a product of exact partial binomials.
  const auto n = static_cast<std::uint64_t>(particles);
  const auto k = static_cast<std::uint64_t>(modes - 1);
  const std::uint64_t small = std::min(n, k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= small; ++i) {
    const std::uint64_t factor = n + k - small + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

std::vector<FockState> enumerate_fock(Index modes, int particles) {
  if (modes < 1) throw Error("Fock enumeration needs at least one mode");
  if (particles < 0) throw Error("particle number must be nonnegative");
  const std::uint64_t count = fock_basis_size(modes, particles);
  if (count > kFockBasisLimit) {
    std::ostringstream msg;
    msg << "Fock basis has " << count << " states, above the enumeration guard of "
        << kFockBasisLimit;
    throw Error(msg.str());
  }
  std::vector<FockState> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> prefix(static_cast<std::size_t>(modes), 0);
  enumerate_into(prefix, 0, particles, out);
  return out;
}

FockDistribution::FockDistribution(std::vector<FockState> basis,
                                   std::vector<double> probabilities)
    : basis_(std::move(basis)), probabilities_(std::move(probabilities)) {
  if (basis_.empty()) throw Error("distribution needs a nonempty basis");
  if (basis_.size() != probabilities_.size()) {
    throw Error("basis and probability vector differ in length");
  }
  const double total = std::accumulate(probabilities_.begin(), probabilities_.end(), 0.0);
  if (!(std::abs(total - 1.0) <= kNormalizationTolerance)) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", not 1 within " << kNormalizationTolerance;
    throw Error(msg.str());
  }
  for (double& p : probabilities_) {
    if (!(p >= -kProbabilityFloor)) {
      std::ostringstream msg;
      msg << "negative probability " << p;
      throw Error(msg.str());
    }
    p = std::max(p, 0.0);
  }
}

std::size_t FockDistribution::index_of(const FockState& state) const {
  auto it = std::lower_bound(basis_.begin(), basis_.end(), state, std::greater<>());
  if (it == basis_.end() || *it != state) {
    throw Error("state " + state.to_string() + " is not in the distribution's basis");
  }
  return static_cast<std::size_t>(it - basis_.begin());
}

double FockDistribution::probability(const FockState& state) const {
  return probabilities_[index_of(state)];
}

FockDistribution exact_distribution(const UnitaryMatrix& lambda, const FockState& n_in) {
  if (n_in.modes() != lambda.dim()) throw Error("input state and transition matrix disagree on M");
  std::vector<FockState> basis = enumerate_fock(n_in.modes(), n_in.particles());
  std::vector<double> weights = permanent_weights(lambda.matrix(), basis, n_in);
  return FockDistribution(std::move(basis), std::move(weights));
}

RenormalizedDistribution renormalized_distribution(const ComplexMatrix& lambda,
                                                   const FockState& n_in) {
  if (lambda.rows() != lambda.cols() || n_in.modes() != lambda.rows()) {
    throw Error("input state and transition matrix disagree on M");
  }
  std::vector<FockState> basis = enumerate_fock(n_in.modes(), n_in.particles());
  std::vector<double> weights = permanent_weights(lambda, basis, n_in);
  const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(mass > 0.0)) throw Error("truncated transition matrix carries no probability mass");
  for (double& w : weights) w /= mass;
  return RenormalizedDistribution{FockDistribution(std::move(basis), std::move(weights)), mass};
}

std::vector<std::size_t> sample_indices(const FockDistribution& dist, std::size_t k, Rng& rng) {
  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.probabilities().begin(), dist.probabilities().end(), cdf.begin());
  const double total = cdf.back();
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const double u = uniform(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // Never land on a zero-probability tail state through rounding.
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    while (dist.probabilities()[idx] == 0.0 && idx > 0) --idx;
    out.push_back(idx);
  }
  return out;
}

std::vector<FockState> sample(const FockDistribution& dist, std::size_t k, Rng& rng) {
  std::vector<FockState> out;
  out.reserve(k);
  for (std::size_t idx : sample_indices(dist, k, rng)) out.push_back(dist.basis()[idx]);
  return out;
}

std::vector<FockState> sample(const FockDistribution& dist, std::size_t k, RngSeed seed) {
  Rng rng = seed.stream();
  return sample(dist, k, rng);
}

double total_variation(const FockDistribution& p, const FockDistribution& q) {
  check_same_basis(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p.probabilities()[i] - q.probabilities()[i]);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

MultiplicativeGap multiplicative_gap(const FockDistribution& p, const FockDistribution& q,
                                     double floor) {
  check_same_basis(p, q);
  MultiplicativeGap out;
  out.floor = floor;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probabilities()[i];
    if (pi <= floor) {
      ++out.skipped;
      continue;
    }
    out.gap = std::max(out.gap, std::abs(pi - q.probabilities()[i]) / pi);
  }
  return out;
}

}  // namespace bosonwalk
