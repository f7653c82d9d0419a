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


#include "config.hpp"

#include <sstream>

namespace bosonwalk::cli {
namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw UsageError("format must be csv or json, got '" + s + "'");
}

SublatticeShift parse_shift(const std::string& s) {
  if (s == "full_site") return SublatticeShift::kFullSite;
  if (s == "half_site") return SublatticeShift::kHalfSite;
  throw UsageError("model.shift must be full_site or half_site, got '" + s + "'");
}

ControlBounds parse_bounds(ObjectReader& r, const std::string& key) {
  ControlBounds b;
  const Json* v = r.raw(key);
  if (!v) return b;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
    throw UsageError(r.path() + "." + key + ": expected [lower, upper]");
  }
  b.lower = (*v)[0].get<double>();
  b.upper = (*v)[1].get<double>();
  return b;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

ExperimentConfig load_config(std::string_view command, std::string_view text,
                             const Overrides& overrides, OutputFormat default_format) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << "config parse error at line " << line << ", column " << column << ": " << e.what();
    throw UsageError(msg.str());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");

  ExperimentConfig cfg;
  cfg.command = std::string(command);
  if (doc.contains("command")) {
    if (!doc["command"].is_string() || doc["command"].get<std::string>() != command) {
      throw UsageError("config.command " + doc["command"].dump() + " does not match subcommand '" +
                       std::string(command) + "'");
    }
  }
  if (overrides.seed) doc["seed"] = *overrides.seed;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw UsageError("config.seed must be a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  doc["seed"] = cfg.seed;

  if (overrides.out) doc["out"] = *overrides.out;
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw UsageError("config.out must be a string");
    cfg.out = doc["out"].get<std::string>();
  }
  cfg.format = default_format;
  if (overrides.format) doc["format"] = *overrides.format;
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) throw UsageError("config.format must be a string");
    cfg.format = parse_format(doc["format"].get<std::string>());
  }

  // The hash identifies the experiment, not where its output goes.
  Json hashed = doc;
  hashed.erase("out");
  hashed.erase("format");
  hashed.erase("command");
  cfg.hash = fnv1a_hex(hashed.dump());
  cfg.document = std::move(doc);
  return cfg;
}

ObjectReader::ObjectReader(const Json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) throw UsageError(path_ + ": expected a JSON object");
}

bool ObjectReader::has(const std::string& key) const { return object_.contains(key); }

const Json* ObjectReader::find(const std::string& key) {
  auto it = object_.find(key);
  if (it == object_.end()) return nullptr;
  used_.insert(key);
  return &*it;
}

ObjectReader ObjectReader::child(const std::string& key) {
  const Json* v = find(key);
  if (!v) throw UsageError(path_ + ": missing required object '" + key + "'");
  return ObjectReader(*v, path_ + "." + key);
}

void ObjectReader::finish() const {
  std::vector<std::string> unknown;
  for (auto it = object_.begin(); it != object_.end(); ++it) {
    if (!used_.count(it.key())) unknown.push_back(it.key());
  }
  if (unknown.empty()) return;
  std::ostringstream msg;
  msg << path_ << ": unknown key" << (unknown.size() > 1 ? "s" : "");
  for (const auto& k : unknown) msg << " '" << k << "'";
  throw UsageError(msg.str());
}

Index ModelSpec::dim() const {
  if (matrix) return matrix->dim();
  return std::visit([](const auto& m) { return static_cast<Index>(m.dim()); }, *lattice);
}

ComplexMatrix parse_complex_matrix(const Json& rows, const std::string& path) {
  if (!rows.is_array() || rows.empty()) throw UsageError(path + ": expected a nonempty array of rows");
  const auto n = static_cast<Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw UsageError(path + ": matrix must be square");
    }
    for (Index j = 0; j < n; ++j) {
      const Json& e = row[static_cast<std::size_t>(j)];
      if (e.is_number()) {
        m(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw UsageError(path + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

ModelSpec parse_model(ObjectReader r) {
  ModelSpec spec;
  spec.family = r.required<std::string>("family");
  try {
    if (spec.family == "ring") {
      UniformRing ring;
      ring.sites = r.required<Index>("sites");
      ring.hopping = r.get<double>("hopping", 1.0);
      ring.validate();
      spec.lattice = ring;
    } else if (spec.family == "spinor") {
      SpinorLatticeModel s = make_spinor_model(r.required<Index>("sites"), r.get<double>("rabi", 1.0));
      s.lamb_dicke = r.get<double>("lamb_dicke", s.lamb_dicke);
      s.curvature = r.get<double>("curvature", s.curvature);
      s.shift = parse_shift(r.get<std::string>("shift", "full_site"));
      s.validate();
      spec.lattice = s;
    } else if (spec.family == "microscope") {
      GasMicroscopeModel g;
      g.sites = r.required<Index>("sites");
      g.hopping_scale = r.get<double>("hopping_scale", 1.0);
      g.hx_bounds = parse_bounds(r, "hx_bounds");
      g.hz_bounds = parse_bounds(r, "hz_bounds");
      g.validate();
      spec.lattice = g;
    } else if (spec.family == "matrix") {
      const Json* entries = r.raw("entries");
      if (!entries) throw UsageError(r.path() + ": matrix family needs 'entries'");
      ComplexMatrix m = parse_complex_matrix(*entries, r.path() + ".entries");
      if (const auto scale = r.optional<double>("scale")) m *= *scale;
      spec.matrix = UnitaryMatrix(std::move(m));
    } else {
      throw UsageError(r.path() + ".family: unknown model family '" + spec.family +
                       "' (expected ring, spinor, microscope or matrix)");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(r.path() + ": " + e.what());
  }
  r.finish();
  return spec;
}

}  // namespace bosonwalk::cli
