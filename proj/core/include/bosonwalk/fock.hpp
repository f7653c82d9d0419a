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

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "bosonwalk/linalg.hpp"

namespace bosonwalk {

/// Occupation-number state (n_1, ..., n_M) of M bosonic modes.
class FockState {
 public:
  /// Throws on an empty vector or a negative occupation.
  explicit FockState(std::vector<int> occupations);

  /// One boson in each listed mode, none elsewhere.
  static FockState from_modes(Index modes, std::span<const Index> occupied);

  Index modes() const { return static_cast<Index>(occupations_.size()); }
  int particles() const { return particles_; }
  int operator[](Index mode) const { return occupations_[static_cast<std::size_t>(mode)]; }
  std::span<const int> occupations() const { return occupations_; }

  /// Space-separated occupations, e.g. "2 0 1".
  std::string to_string() const;

  /// Inverse of to_string.
  static FockState parse(const std::string& text);

  friend bool operator==(const FockState&, const FockState&) = default;
  friend auto operator<=>(const FockState& a, const FockState& b) {
    return a.occupations_ <=> b.occupations_;
  }

 private:
  std::vector<int> occupations_;
  int particles_ = 0;
};

/// n! from a table; exact for n <= 22 and guarded at n <= 64.
double factorial(int n);

}  // namespace bosonwalk
