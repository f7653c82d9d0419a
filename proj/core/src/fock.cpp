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

#include "bosonwalk/fock.hpp"

#include <array>
#include <numeric>
#include <sstream>

namespace bosonwalk {
namespace {

constexpr int kFactorialTableSize = 65;

constexpr std::array<double, kFactorialTableSize> make_factorials() {
  std::array<double, kFactorialTableSize> table{};
  table[0] = 1.0;
  for (int n = 1; n < kFactorialTableSize; ++n) table[n] = table[n - 1] * n;
  return table;
}

constexpr auto kFactorials = make_factorials();

}  // namespace

FockState::FockState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
  if (occupations_.empty()) throw Error("Fock state needs at least one mode");
  for (int n : occupations_) {
    if (n < 0) throw Error("Fock occupations must be nonnegative");
  }
  particles_ = std::accumulate(occupations_.begin(), occupations_.end(), 0);
}

FockState FockState::from_modes(Index modes, std::span<const Index> occupied) {
  if (modes < 1) throw Error("Fock state needs at least one mode");
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  for (Index m : occupied) {
    if (m < 0 || m >= modes) throw Error("occupied mode index out of range");
    ++occ[static_cast<std::size_t>(m)];
  }
  return FockState(std::move(occ));
}

std::string FockState::to_string() const {
  std::ostringstream s;
  for (std::size_t i = 0; i < occupations_.size(); ++i) {
    if (i) s << ' ';
    s << occupations_[i];
  }
  return s.str();
}

FockState FockState::parse(const std::string& text) {
  std::istringstream s(text);
  std::vector<int> occ;
  int n = 0;
  while (s >> n) occ.push_back(n);
  if (!s.eof()) throw Error("cannot parse Fock state '" + text + "'");
  return FockState(std::move(occ));
}

double factorial(int n) {
  if (n < 0 || n >= kFactorialTableSize) throw Error("factorial argument out of table range");
  return kFactorials[static_cast<std::size_t>(n)];
}

}  // namespace bosonwalk
