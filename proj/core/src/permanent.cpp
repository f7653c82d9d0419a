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

#include "bosonwalk/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <thread>

#include "bosonwalk/lattice.hpp"

namespace bosonwalk {
namespace {

/// Kahan-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_component(x.real(), re_, re_c_);
    add_component(x.imag(), im_, im_c_);
  }
  Complex value() const { return {re_, im_}; }

 private:
  static void add_component(double x, double& sum, double& c) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

/// Glynn terms k in [begin, end) of the Gray-code walk over sign vectors
/// delta_1..delta_{n-1} (delta_0 = +1 fixed).
Complex glynn_range(const ComplexMatrix& a, std::uint64_t begin, std::uint64_t end) {
  const Index n = a.rows();
  const std::uint64_t gray = begin ^ (begin >> 1);
  ComplexVector col_sum = a.colwise().sum().transpose();
  std::vector<int> delta(static_cast<std::size_t>(n), 1);
  for (Index i = 1; i < n; ++i) {
    if ((gray >> (i - 1)) & 1u) {
      delta[static_cast<std::size_t>(i)] = -1;
      col_sum -= 2.0 * a.row(i).transpose();
    }
  }
  double sign = (std::popcount(gray) % 2 == 0) ? 1.0 : -1.0;

  CompensatedSum total;
  auto accumulate = [&]() {
    Complex prod = col_sum[0];
    for (Index j = 1; j < n; ++j) prod *= col_sum[j];
    total.add(sign * prod);
  };
  accumulate();
  for (std::uint64_t k = begin + 1; k < end; ++k) {
    const Index row = std::countr_zero(k) + 1;
    auto& d = delta[static_cast<std::size_t>(row)];
    d = -d;
    col_sum += (2.0 * d) * a.row(row).transpose();
    sign = -sign;
    accumulate();
  }
  return total.value();
}

}  // namespace

std::string_view to_string(PermanentMethod method) {
  switch (method) {
    case PermanentMethod::kRyser:
      return "ryser";
    case PermanentMethod::kBandedDp:
      return "banded_dp";
    case PermanentMethod::kCyclicDp:
      return "cyclic_dp";
    case PermanentMethod::kTransferPower:
      return "transfer_power";
  }
  return "unknown";
}

PermanentResult permanent_dense(const ComplexMatrix& a, const PermanentOptions& options) {
  if (a.rows() != a.cols()) throw Error("permanent needs a square matrix");
  const Index n = a.rows();
  if (n > kDensePermanentLimit) {
    std::ostringstream msg;
    msg << "dense permanent limited to N <= " << kDensePermanentLimit << " (got " << n
        << "); use permanent_banded for banded matrices";
    throw Error(msg.str());
  }
  PermanentResult result;
  result.method = PermanentMethod::kRyser;
  if (n == 0) {
    result.value = 1.0;
    return result;
  }
  const std::uint64_t terms = std::uint64_t{1} << (n - 1);
  result.cost_estimate = terms * 2 * static_cast<std::uint64_t>(n);

  unsigned workers = 1;
  if (!options.deterministic) {
    workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, terms));
  }

  Complex sum;
  if (workers <= 1) {
    sum = glynn_range(a, 0, terms);
  } else {
    std::vector<Complex> partial(workers);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (terms + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(terms, begin + chunk);
      if (begin >= end) continue;
      pool.emplace_back([&, w, begin, end] { partial[w] = glynn_range(a, begin, end); });
    }
    for (auto& t : pool) t.join();
    CompensatedSum total;
    for (const Complex& p : partial) total.add(p);
    sum = total.value();
  }
  result.value = sum / static_cast<double>(terms);
  return result;
}

BandedMatrix::BandedMatrix(Index n, Index lower, Index upper, bool cyclic)
    : n_(n), lower_(lower), upper_(upper), cyclic_(cyclic) {
  if (n < 1) throw Error("banded matrix needs N >= 1");
  if (lower < 0 || upper < 0) throw Error("band half-widths must be nonnegative");
  if (lower + upper > n - 1) throw Error("band wider than the matrix");
  diagonals_ = ComplexMatrix::Zero(lower + upper + 1, n);
}

bool BandedMatrix::offset_valid(Index offset, Index column) const {
  if (offset < -upper_ || offset > lower_) return false;
  if (cyclic_) return true;
  const Index row = column + offset;
  return row >= 0 && row < n_;
}

bool BandedMatrix::in_band(Index i, Index j) const {
  const Index o = i - j;
  if (offset_valid(o, j)) return true;
  if (!cyclic_) return false;
  return offset_valid(o - n_, j) || offset_valid(o + n_, j);
}

Complex BandedMatrix::on_diagonal(Index offset, Index column) const {
  if (!offset_valid(offset, column)) return Complex(0.0);
  return diagonals_(offset + upper_, column);
}

Complex BandedMatrix::operator()(Index i, Index j) const {
  for (Index o : {i - j, i - j - n_, i - j + n_}) {
    if (offset_valid(o, j)) return diagonals_(o + upper_, j);
  }
  return Complex(0.0);
}

void BandedMatrix::set(Index i, Index j, Complex value) {
  for (Index o : {i - j, i - j - n_, i - j + n_}) {
    if (offset_valid(o, j)) {
      diagonals_(o + upper_, j) = value;
      return;
    }
  }
  std::ostringstream msg;
  msg << "entry (" << i << ", " << j << ") lies outside the band";
  throw Error(msg.str());
}

BandedMatrix BandedMatrix::from_dense(const ComplexMatrix& a, Index lower, Index upper,
                                      bool cyclic) {
  if (a.rows() != a.cols()) throw Error("banded matrix must be square");
  BandedMatrix b(a.rows(), lower, upper, cyclic);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (b.in_band(i, j)) {
        b.set(i, j, a(i, j));
      } else if (a(i, j) != Complex(0.0)) {
        std::ostringstream msg;
        msg << "nonzero entry (" << i << ", " << j << ") outside band (" << lower << ", "
            << upper << (cyclic ? ", cyclic)" : ")");
        throw Error(msg.str());
      }
    }
  }
  return b;
}

BandedMatrix BandedMatrix::from_dense(const ComplexMatrix& a) {
  const BandSpec spec = measure_band(a);
  return from_dense(a, spec.lower, spec.upper, spec.cyclic);
}

BandedMatrix BandedMatrix::circulant(Index n, Index lower, Index upper,
                                     const std::vector<Complex>& diagonal) {
  if (static_cast<Index>(diagonal.size()) != lower + upper + 1) {
    throw Error("circulant band needs lower + upper + 1 diagonal values");
  }
  BandedMatrix b(n, lower, upper, true);
  for (Index o = -upper; o <= lower; ++o) {
    b.diagonals_.row(o + upper).setConstant(diagonal[static_cast<std::size_t>(o + upper)]);
  }
  return b;
}

bool BandedMatrix::is_circulant(double relative_tolerance) const {
  if (cyclic_ && lower_ + upper_ + 1 <= n_) {
    // Stored diagonals are disjoint, so each one must be constant.
    const double scale = std::max(diagonals_.cwiseAbs().maxCoeff(),
                                  std::numeric_limits<double>::min());
    for (Index d = 0; d < diagonals_.rows(); ++d) {
      for (Index j = 1; j < n_; ++j) {
        if (std::abs(diagonals_(d, j) - diagonals_(d, 0)) > relative_tolerance * scale) {
          return false;
        }
      }
    }
    return true;
  }
  const ComplexMatrix dense = to_dense();
  const double scale = std::max(max_abs(dense), std::numeric_limits<double>::min());
  for (Index o = 0; o < n_; ++o) {
    const Complex ref = dense(o % n_, 0);
    for (Index j = 1; j < n_; ++j) {
      if (std::abs(dense((j + o) % n_, j) - ref) > relative_tolerance * scale) return false;
    }
  }
  return true;
}

ComplexMatrix BandedMatrix::to_dense() const {
  ComplexMatrix a = ComplexMatrix::Zero(n_, n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index o = -upper_; o <= lower_; ++o) {
      if (!offset_valid(o, j)) continue;
      const Index i = ((j + o) % n_ + n_) % n_;
      a(i, j) = diagonals_(o + upper_, j);
    }
  }
  return a;
}

ComplexMatrix transition_submatrix(const ComplexMatrix& lambda, const FockState& n_in,
                                   const FockState& n_out) {
  if (lambda.rows() != lambda.cols()) throw Error("transition matrix must be square");
  if (n_in.modes() != lambda.cols() || n_out.modes() != lambda.rows()) {
    throw Error("Fock states and transition matrix disagree on the number of modes");
  }
  if (n_in.particles() != n_out.particles()) throw Error("particle number not conserved");

  std::vector<Index> rows;
  std::vector<Index> cols;
  for (Index l = 0; l < lambda.rows(); ++l) {
    rows.insert(rows.end(), static_cast<std::size_t>(n_out[l]), l);
    cols.insert(cols.end(), static_cast<std::size_t>(n_in[l]), l);
  }
  const auto n = static_cast<Index>(rows.size());
  ComplexMatrix sub(n, n);
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < n; ++a) {
      sub(a, b) = lambda(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
    }
  }
  return sub;
}

double transition_weight(const ComplexMatrix& lambda, const FockState& n_in,
                         const FockState& n_out) {
  const ComplexMatrix sub = transition_submatrix(lambda, n_in, n_out);
  const Complex perm = permanent_dense(sub).value;
  double norm = 1.0;
  for (Index l = 0; l < n_in.modes(); ++l) norm *= factorial(n_in[l]) * factorial(n_out[l]);
  return std::norm(perm) / norm;
}

double transition_probability(const UnitaryMatrix& lambda, const FockState& n_in,
                              const FockState& n_out) {
  return transition_weight(lambda.matrix(), n_in, n_out);
}

}  // namespace bosonwalk
