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
#include <string_view>
#include <vector>

#include "vaf/analytic_model.hpp"
#include "vaf/autoscaler.hpp"
#include "vaf/schedulers.hpp"

namespace vaf::cli {

enum class ArrivalSource { kExplicit, kRampUp, kElastic };
enum class SchedulerChoice { kPull, kPush, kBoth };

/// One experiment, as read from a sectioned key-value file:
///
///   name = cern-pull-240h
///   seed = 1
///   [model]
///   preset = cern-2013
///   [workload]
///   total_work = 240h
///   packet_target = 10s
///   [arrivals]
///   source = rampup
///
/// Sections are model, workload, arrivals, cloud, elastiq and output. Times
/// take s/min/h/d suffixes, rates a /s, /min, /h or /d suffix.
struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  /// Hash of the normalized source text, carried in every CSV.
  std::string hash;

  ArrivalSource source = ArrivalSource::kRampUp;

  // Task-farm runs (explicit or ramp-up arrivals).
  std::optional<model::RampUpParams> params;
  sched::Workload workload;
  SchedulerChoice scheduler = SchedulerChoice::kBoth;
  std::vector<sched::WorkerRecord> workers;  // explicit list
  std::size_t max_workers = 1000;            // ramp-up arrivals below the ceiling
  double init_duration = 0.0;
  double speed = 1.0;
  std::optional<std::size_t> push_jobs;  // defaults to the optimal count
  sched::PullConfig pull;

  // Closed-loop elastic runs.
  autoscale::ElasticScenario elastic;

  bool trace = false;
};

/// Parses scenario text. Errors are InputErrors of the form
/// "<origin>:<line>: <section>.<key>: <reason>".
Scenario parse_scenario(std::string_view text, std::string_view origin = "scenario");

/// Appends `section.key=value` overrides to scenario text.
std::string with_overrides(std::string text, const std::vector<std::string>& overrides);

std::optional<std::string> builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

/// Reads a scenario file, or a built-in scenario when no such file exists.
std::string load_scenario_text(const std::string& name_or_path);

}  // namespace vaf::cli
