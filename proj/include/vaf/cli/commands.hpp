// Copyright 2026 The VAF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vaf/analytic_model.hpp"
#include "vaf/cli/scenario.hpp"

namespace vaf::cli {

struct OutputFile {
  std::string name;     // e.g. "model.csv"
  std::string content;  // full CSV text, metadata line included
};

struct CommandResult {
  std::vector<OutputFile> files;
  std::string summary;  // one or more lines for standard output
};

/// Ramp-up parameters from a preset name or explicit rates (per second).
model::RampUpParams resolve_params(const std::optional<std::string>& preset,
                                   std::optional<double> p0, std::optional<double> p1);

struct ModelRequest {
  model::RampUpParams params;
  std::string label;  // preset name or "custom", for the scenario hash
  double work_from = 0.0;  // core-seconds
  double work_to = 0.0;
  std::size_t samples = 100;
  bool linear = false;  // log spacing by default
  std::string unit = "h";
  std::uint64_t seed = 1;
};

/// Columns T, t_pull, t_push (in `unit`), ratio and n_optimal.
CommandResult cmd_model(const ModelRequest& request);

struct CompareRequest {
  model::RampUpParams params;
  std::string label;
  std::vector<double> work;  // core-seconds
  std::string unit = "h";
  std::uint64_t seed = 1;
};

/// Columns T, t_pull, t_push (in `unit`) and speedup_pct = (1 - ratio) * 100.
CommandResult cmd_compare(const CompareRequest& request);

/// Fit report for `t,n` samples (seconds, jobs); `source` is hashed.
CommandResult cmd_fit(const std::vector<model::RampUpSample>& samples, const std::string& source,
                      std::uint64_t seed = 1);

struct CalibrateRequest {
  double work = 0.0;  // core-seconds
  double t_pull = 0.0;
  double t_push = 0.0;
  double preferred_max_jobs = 100.0;
  std::uint64_t seed = 1;
};

CommandResult cmd_calibrate(const CalibrateRequest& request);

/// Runs a task-farm or closed-loop scenario. `seed` overrides the file's.
CommandResult cmd_simulate(const Scenario& scenario, std::optional<std::uint64_t> seed = {});

/// Columns of a simulate output file whose values depend on random draws.
/// Event logs (timeline, ticks, trace) count as stochastic throughout.
std::vector<std::string> stochastic_columns(const std::string& file_name);

}  // namespace vaf::cli
