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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bosonwalk/lattice.hpp"
#include "bosonwalk/linalg.hpp"

namespace bosonwalk::cli {

using Json = nlohmann::json;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNotConverged = 2,
  kExitBudget = 3,
};

/// Usage, parse or validation failure; maps to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { kCsv, kJson };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

struct ExperimentConfig {
  std::string command;
  Json document;  // effective config with overrides applied
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::kCsv;
  std::string hash;  // FNV-1a of the effective document, hex
};

/// Parses one JSON document. Top-level "command", "seed", "out" and "format"
/// are read here; everything else is left to the subcommand. Malformed JSON
/// throws UsageError naming line and column.
ExperimentConfig load_config(std::string_view command, std::string_view text,
                             const Overrides& overrides, OutputFormat default_format);

std::string fnv1a_hex(std::string_view bytes);

/// Reads keys from one JSON object and rejects any key it was never asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  bool has(const std::string& key) const;

  template <class T>
  T get(const std::string& key, T fallback) {
    const Json* v = find(key);
    return v ? convert<T>(*v, key) : fallback;
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    const Json* v = find(key);
    if (!v) return std::nullopt;
    return convert<T>(*v, key);
  }

  template <class T>
  T required(const std::string& key) {
    const Json* v = find(key);
    if (!v) throw UsageError(path_ + ": missing required key '" + key + "'");
    return convert<T>(*v, key);
  }

  /// Raw access; marks the key as consumed.
  const Json* raw(const std::string& key) { return find(key); }
  ObjectReader child(const std::string& key);

  /// Throws UsageError listing keys that were never read.
  void finish() const;

  const std::string& path() const { return path_; }

 private:
  const Json* find(const std::string& key);

  template <class T>
  T convert(const Json& v, const std::string& key) const {
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError(path_ + "." + key + ": unexpected value " + v.dump());
    }
  }

  const Json& object_;
  std::string path_;
  std::set<std::string> used_;
};

/// A model from the config. "matrix" carries an explicit single-particle
/// transition matrix instead of a Hamiltonian.
struct ModelSpec {
  std::string family;
  std::optional<LatticeModel> lattice;
  std::optional<UnitaryMatrix> matrix;

  Index dim() const;
};

ModelSpec parse_model(ObjectReader reader);

/// [[ [re, im], ... ], ...] or [[re, ...], ...]
ComplexMatrix parse_complex_matrix(const Json& rows, const std::string& path);

}  // namespace bosonwalk::cli
