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


// Independent reference implementations used only by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "bosonwalk/fock.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk::oracle {

/// Sum over all N! permutations.
inline Complex naive_permanent(const ComplexMatrix& a) {
  const Index n = a.rows();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Complex total = 0.0;
  do {
    Complex prod = 1.0;
    for (Index i = 0; i < n; ++i) prod *= a(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// exp(-i h t) by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix taylor_expm(const ComplexMatrix& h, double t) {
  const Index d = h.rows();
  ComplexMatrix a = Complex(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  a /= std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(d, d);
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Output amplitudes <n_out| U |n_in> for every occupation pattern, built by
/// applying sum_l' Lambda_{l'l} a^dagger_{l'} once per input boson to the
/// vacuum. Keys are occupation vectors.
inline std::map<std::vector<int>, Complex> state_vector_amplitudes(const ComplexMatrix& lambda,
                                                                   const FockState& n_in) {
  const Index m = lambda.rows();
  std::map<std::vector<int>, Complex> state{{std::vector<int>(static_cast<std::size_t>(m), 0), 1.0}};
  double norm = 1.0;
  for (Index l = 0; l < m; ++l) {
    for (int copy = 0; copy < n_in[l]; ++copy) {
      std::map<std::vector<int>, Complex> next;
      for (const auto& [occ, amp] : state) {
        for (Index lp = 0; lp < m; ++lp) {
          std::vector<int> raised = occ;
          const int before = raised[static_cast<std::size_t>(lp)]++;
          next[raised] += amp * lambda(lp, l) * std::sqrt(static_cast<double>(before + 1));
        }
      }
      state = std::move(next);
      norm *= static_cast<double>(copy + 1);
    }
  }
  for (auto& [occ, amp] : state) amp /= std::sqrt(norm);
  return state;
}

inline ComplexMatrix random_complex(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = Complex(normal(rng), normal(rng));
  }
  return a;
}

inline ComplexMatrix random_hermitian(Index d, Rng& rng) {
  const ComplexMatrix a = random_complex(d, d, rng);
  return 0.5 * (a + a.adjoint());
}

inline double relative_error(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace bosonwalk::oracle
