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
#include <string>
#include <vector>

#include "config.hpp"

namespace bosonwalk::cli {

struct Io {
  std::ostream& out;  // primary output when no --out is given
  std::ostream& err;  // warnings and errors
};

int cmd_fig1(const ExperimentConfig& cfg, Io& io);
int cmd_sample(const ExperimentConfig& cfg, Io& io);
int cmd_grape(const ExperimentConfig& cfg, Io& io);
int cmd_scan(const ExperimentConfig& cfg, Io& io);
int cmd_closure(const ExperimentConfig& cfg, Io& io);

/// Full command line: bosonwalk <fig1|sample|grape|scan|closure> CONFIG
/// [--seed N] [--out PATH] [--format csv|json]. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bosonwalk::cli
