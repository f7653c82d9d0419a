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

// Permanents of (cyclically) banded matrices by a column sweep.
//
// Column j may only take a row from the window [j - upper, j + lower]. Rows
// are addressed by an "extended" index r; in the cyclic case rows near the
// ends have two extended representatives (r and r -/+ N). Before column j the
// sweep state is a bitmask over the window: bit k set means extended row
// j - upper + k is consumed, either already matched to an earlier column or
// not available to this sweep at all. The lowest row of the window must be
// consumed before the window slides, since no later column can reach it.
//
// For cyclic bands each permutation has exactly one extended representation
// once we fix which boundary rows are reached through the wrap:
//   hi: rows in [N - upper, N) taken through r = row - N (by early columns)
//   lo: rows in [0, lower) taken through r = row + N (by late columns)
// Summing the linear sweep over all 2^B choices of (hi, lo) gives the
// permanent.

#include <cstdint>
#include <sstream>
#include <vector>

#include "bosonwalk/permanent.hpp"

namespace bosonwalk {
namespace {

struct Window {
  Index n;
  Index lower;
  Index upper;
  Index width() const { return lower + upper + 1; }
  std::size_t states() const { return std::size_t{1} << width(); }
};

/// Which boundary rows are taken through their wrapped representative.
struct Boundary {
  std::uint32_t hi = 0;  // bit b <-> row N - upper + b
  std::uint32_t lo = 0;  // bit b <-> row b
};

class RowStatus {
 public:
  RowStatus(const Window& w, bool cyclic, Boundary boundary)
      : w_(w), cyclic_(cyclic), boundary_(boundary) {}

  bool available(Index r) const {
    const Index n = w_.n;
    if (!cyclic_) return r >= 0 && r < n;
    if (r < -w_.upper || r > n - 1 + w_.lower) return false;
    if (r < 0) return in_hi(r + n);
    if (r >= n) return in_lo(r - n);
    if (r >= n - w_.upper && in_hi(r)) return false;
    if (r < w_.lower && in_lo(r)) return false;
    return true;
  }

 private:
  bool in_hi(Index row) const { return (boundary_.hi >> (row - (w_.n - w_.upper))) & 1u; }
  bool in_lo(Index row) const { return (boundary_.lo >> row) & 1u; }

  Window w_;
  bool cyclic_;
  Boundary boundary_;
};

std::size_t initial_mask(const Window& w, const RowStatus& status) {
  std::size_t mask = 0;
  for (Index k = 0; k < w.width(); ++k) {
    if (!status.available(-w.upper + k)) mask |= std::size_t{1} << k;
  }
  return mask;
}

/// Matches column j to one row of its window and slides the window by one.
void sweep_column(const BandedMatrix& a, const Window& w, const RowStatus& status, Index j,
                  const std::vector<Complex>& amp, std::vector<Complex>& next,
                  std::uint64_t& ops) {
  std::fill(next.begin(), next.end(), Complex(0.0));
  const Index width = w.width();
  const std::size_t top =
      status.available(j + 1 + w.lower) ? 0 : (std::size_t{1} << (width - 1));
  for (std::size_t m = 0; m < amp.size(); ++m) {
    const Complex x = amp[m];
    if (x == Complex(0.0)) continue;
    for (Index k = 0; k < width; ++k) {
      if ((m >> k) & 1u) continue;
      const std::size_t taken = m | (std::size_t{1} << k);
      if (!(taken & 1u)) break;  // lowest row left unmatched for good
      const Complex v = a.on_diagonal(k - w.upper, j);
      if (v == Complex(0.0)) continue;
      next[(taken >> 1) | top] += x * v;
      ++ops;
    }
  }
}

Complex sweep(const BandedMatrix& a, const Window& w, const RowStatus& status,
              std::uint64_t& ops) {
  std::vector<Complex> amp(w.states(), Complex(0.0));
  std::vector<Complex> next(w.states());
  amp[initial_mask(w, status)] = 1.0;
  for (Index j = 0; j < w.n; ++j) {
    sweep_column(a, w, status, j, amp, next, ops);
    amp.swap(next);
  }
  return amp[w.states() - 1];
}

void check_band_guard(const BandedMatrix& a) {
  if (a.band() > kBandLimit) {
    std::ostringstream msg;
    msg << "band B = " << a.band() << " exceeds the state-space guard B <= " << kBandLimit;
    throw Error(msg.str());
  }
}

}  // namespace

PermanentResult permanent_banded(const BandedMatrix& a) {
  check_band_guard(a);
  const Window w{a.dim(), a.lower(), a.upper()};
  PermanentResult result;
  std::uint64_t ops = 0;
  if (!a.cyclic()) {
    result.value = sweep(a, w, RowStatus(w, false, {}), ops);
    result.method = PermanentMethod::kBandedDp;
  } else {
    Complex total = 0.0;
    for (std::uint32_t hi = 0; hi < (1u << a.upper()); ++hi) {
      for (std::uint32_t lo = 0; lo < (1u << a.lower()); ++lo) {
        total += sweep(a, w, RowStatus(w, true, Boundary{hi, lo}), ops);
      }
    }
    result.value = total;
    result.method = PermanentMethod::kCyclicDp;
  }
  result.cost_estimate = ops;
  return result;
}

PermanentResult permanent_circulant_banded(const BandedMatrix& a) {
  check_band_guard(a);
  if (!a.is_circulant()) throw Error("transfer-power permanent needs a circulant band");

  // Treat the band as cyclic: with constant diagonals every wrapped position
  // carries the same value as its unwrapped counterpart.
  BandedMatrix band(a.dim(), a.lower(), a.upper(), true);
  for (Index o = -a.upper(); o <= a.lower(); ++o) {
    const Complex v = a(((o % a.dim()) + a.dim()) % a.dim(), 0);
    for (Index j = 0; j < a.dim(); ++j) {
      band.set(((j + o) % a.dim() + a.dim()) % a.dim(), j, v);
    }
  }

  const Window w{a.dim(), a.lower(), a.upper()};
  const auto states = static_cast<Index>(w.states());
  const Index width = w.width();

  // Interior transfer: incoming row always available, same entries each column.
  ComplexMatrix transfer = ComplexMatrix::Zero(states, states);
  for (Index m = 0; m < states; ++m) {
    for (Index k = 0; k < width; ++k) {
      if ((m >> k) & 1) continue;
      const Index taken = m | (Index{1} << k);
      if (!(taken & 1)) break;
      transfer(taken >> 1, m) += band.on_diagonal(k - w.upper, 0);
    }
  }

  // Columns 0 .. N - B - 2 pull in rows lower + 1 .. N - upper - 1, none of
  // which is a boundary row.
  const Index interior = w.n - a.band() - 1;
  std::uint64_t ops = 0;
  const auto product_cost = static_cast<std::uint64_t>(states) * states * states;
  ComplexMatrix power = ComplexMatrix::Identity(states, states);
  {
    ComplexMatrix base = transfer;
    bool first = true;
    for (Index e = interior; e > 0; e >>= 1) {
      if (e & 1) {
        if (first) {
          power = base;
          first = false;
        } else {
          power = base * power;
          ops += product_cost;
        }
      }
      if (e > 1) {
        base = base * base;
        ops += product_cost;
      }
    }
  }

  Complex total = 0.0;
  std::vector<Complex> amp(w.states());
  std::vector<Complex> next(w.states());
  for (std::uint32_t hi = 0; hi < (1u << a.upper()); ++hi) {
    for (std::uint32_t lo = 0; lo < (1u << a.lower()); ++lo) {
      const RowStatus status(w, true, Boundary{hi, lo});
      const auto start = static_cast<Index>(initial_mask(w, status));
      for (Index m = 0; m < states; ++m) amp[static_cast<std::size_t>(m)] = power(m, start);
      for (Index j = interior; j < w.n; ++j) {
        sweep_column(band, w, status, j, amp, next, ops);
        amp.swap(next);
      }
      total += amp[w.states() - 1];
    }
  }

  PermanentResult result;
  result.value = total;
  result.method = PermanentMethod::kTransferPower;
  result.cost_estimate = ops;
  return result;
}

}  // namespace bosonwalk
