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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bosonwalk/control.hpp"
#include "config.hpp"

namespace bosonwalk::cli {

/// Scientific notation with 17 significant digits.
std::string format_number(double v);

/// CSV text that opens with "# config_hash=<hex> seed=<n>[ extra]" and a
/// header row.
class CsvWriter {
 public:
  CsvWriter(const ExperimentConfig& cfg, std::vector<std::string> header, std::string extra = {});

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(Index v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(bool v) { return cell(std::string(v ? "true" : "false")); }
  void end_row();

  std::string str() const;

 private:
  std::string text_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

/// Writes `content` to `path`, or to `fallback` when no path is given.
void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& fallback);

/// `path` + suffix, or nullopt when output goes to stdout.
std::optional<std::string> sibling(const std::optional<std::string>& path, const std::string& suffix);

std::string read_file(const std::string& path);

/// step,<channel>,... with dt recorded in the comment line.
std::string waveform_csv(const ExperimentConfig& cfg, const ControlWaveform& wf);
ControlWaveform parse_waveform_csv(const std::string& text);

/// Inline {"dt": ..., "channels": {"name": [...], ...}} in model channel order.
ControlWaveform parse_waveform_json(const Json& j, const std::vector<std::string>& channels,
                                    const std::string& path);

Json matrix_json(const ComplexMatrix& m);
Json waveform_json(const ControlWaveform& wf);

/// Everything but wall time, so repeated runs serialize identically.
Json grape_result_json(const GrapeResult& r);

}  // namespace bosonwalk::cli
