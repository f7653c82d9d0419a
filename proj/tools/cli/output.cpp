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


#include "output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bosonwalk::cli {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw UsageError("bad number '" + s + "' in " + what);
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(const ExperimentConfig& cfg, std::vector<std::string> header, std::string extra)
    : columns_(header.size()) {
  text_ = "# config_hash=" + cfg.hash + " seed=" + std::to_string(cfg.seed);
  if (!extra.empty()) text_ += " " + extra;
  text_ += "\n";
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (in_row_ == columns_) throw Error("CSV row has more cells than the header");
  if (in_row_) text_ += ',';
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    text_ += quoted + "\"";
  } else {
    text_ += s;
  }
  ++in_row_;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw Error("CSV row has fewer cells than the header");
  text_ += '\n';
  in_row_ = 0;
}

std::string CsvWriter::str() const { return text_; }

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& fallback) {
  if (!path || *path == "-") {
    fallback << content;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open " + *path + " for writing");
  file << content;
  if (!file) throw Error("failed writing " + *path);
}

std::optional<std::string> sibling(const std::optional<std::string>& path, const std::string& suffix) {
  if (!path || *path == "-") return std::nullopt;
  return *path + suffix;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::string waveform_csv(const ExperimentConfig& cfg, const ControlWaveform& wf) {
  std::vector<std::string> header{"step"};
  header.insert(header.end(), wf.channels().begin(), wf.channels().end());
  CsvWriter csv(cfg, header, "dt=" + format_number(wf.dt()));
  for (Index k = 0; k < wf.steps(); ++k) {
    csv.cell(k);
    for (Index c = 0; c < wf.channel_count(); ++c) csv.cell(wf(k, c));
    csv.end_row();
  }
  return csv.str();
}

ControlWaveform parse_waveform_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<double> dt;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("dt=");
      if (pos != std::string::npos) {
        std::string value = line.substr(pos + 3);
        value = value.substr(0, value.find(' '));
        dt = parse_double(value, "waveform dt");
      }
      continue;
    }
    if (header.empty()) {
      header = split(line, ',');
      if (header.size() < 2 || header[0] != "step") throw UsageError("waveform CSV header must start with 'step'");
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) throw UsageError("waveform CSV row has the wrong number of fields");
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(parse_double(fields[i], "waveform CSV"));
    rows.push_back(std::move(row));
  }
  if (!dt) throw UsageError("waveform CSV does not record dt= in its comment line");
  if (rows.empty()) throw UsageError("waveform CSV has no steps");
  Eigen::MatrixXd values(static_cast<Index>(rows.size()), static_cast<Index>(header.size() - 1));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t c = 0; c < rows[k].size(); ++c) values(static_cast<Index>(k), static_cast<Index>(c)) = rows[k][c];
  }
  return ControlWaveform(std::vector<std::string>(header.begin() + 1, header.end()), values, *dt);
}

ControlWaveform parse_waveform_json(const Json& j, const std::vector<std::string>& channels,
                                    const std::string& path) {
  ObjectReader r(j, path);
  const double dt = r.required<double>("dt");
  ObjectReader ch = r.child("channels");
  std::vector<std::vector<double>> cols;
  for (const auto& name : channels) cols.push_back(ch.required<std::vector<double>>(name));
  ch.finish();
  r.finish();
  const std::size_t k = cols.front().size();
  Eigen::MatrixXd values(static_cast<Index>(k), static_cast<Index>(channels.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != k) throw UsageError(path + ": every channel needs the same number of steps");
    for (std::size_t s = 0; s < k; ++s) values(static_cast<Index>(s), static_cast<Index>(c)) = cols[c][s];
  }
  try {
    return ControlWaveform(channels, values, dt);
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Json matrix_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return Json{{"re", re}, {"im", im}};
}

Json waveform_json(const ControlWaveform& wf) {
  Json channels = Json::object();
  for (Index c = 0; c < wf.channel_count(); ++c) {
    std::vector<double> v(wf.values().col(c).data(), wf.values().col(c).data() + wf.steps());
    channels[wf.channels()[static_cast<std::size_t>(c)]] = v;
  }
  return Json{{"dt", wf.dt()}, {"steps", wf.steps()}, {"channels", channels}};
}

Json grape_result_json(const GrapeResult& r) {
  return Json{
      {"infidelity", r.infidelity},
      {"iterations", r.iterations},
      {"stop_reason", std::string(to_string(r.reason))},
      {"converged", r.converged()},
      {"fidelity_trace", r.fidelity_trace},
      {"waveform", waveform_json(r.waveform)},
      {"unitary", matrix_json(r.unitary.matrix())},
  };
}

}  // namespace bosonwalk::cli
