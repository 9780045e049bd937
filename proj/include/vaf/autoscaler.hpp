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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vaf/cloud_sim.hpp"
#include "vaf/sim_engine.hpp"

// Queue-driven elastic policy: request VMs when enough jobs have waited too
// long, shut down VMs that stay idle, keep the fleet between quotas, and
// shrug off cloud API errors because the next poll re-derives the need.

namespace vaf::autoscale {

struct ElastiqConfig {
  double poll_interval = 60.0;
  std::size_t waiting_jobs_threshold = 1;
  double waiting_time_threshold = 100.0;
  std::size_t jobs_per_vm = 4;
  double idle_time_threshold = 1800.0;
  std::size_t min_quota = 0;
  std::size_t max_quota = 10;

  void validate() const;
};

struct WaitingJob {
  std::uint64_t id = 0;
  double waiting_since = 0.0;
};

struct NodeStatus {
  std::string id;
  std::size_t running_jobs = 0;
  std::optional<double> idle_since;  // set iff running_jobs == 0
};

struct QueueSnapshot {
  std::vector<WaitingJob> waiting_jobs;
  std::vector<NodeStatus> nodes;
};

struct FleetView {
  std::size_t running = 0;             // registered nodes
  std::size_t pending_or_booting = 0;  // requested, not yet registered
};

struct RequestVMs {
  std::size_t count = 0;
  bool operator==(const RequestVMs&) const = default;
};

struct ShutdownVM {
  std::string node_id;
  bool operator==(const ShutdownVM&) const = default;
};

using ScaleAction = std::variant<RequestVMs, ShutdownVM>;

std::string describe(const ScaleAction& action);

/// Pure decision function over one queue/fleet snapshot. Throws InputError
/// for an inconsistent snapshot.
std::vector<ScaleAction> evaluate(const ElastiqConfig& config, const QueueSnapshot& snapshot,
                                  const FleetView& fleet, double now);

struct AppliedAction {
  ScaleAction action;
  bool ok = false;
  std::vector<std::string> granted;  // instance ids for a successful request
  std::string error;
};

struct ApplyReport {
  std::vector<AppliedAction> entries;
  std::size_t granted = 0;
  std::size_t failures = 0;
};

/// Forwards actions to the cloud. Errors are recorded, never thrown, and
/// never retried within the same tick.
ApplyReport apply(const std::vector<ScaleAction>& actions, cloud::Cloud& cloud);

struct Submission {
  double time = 0.0;
  std::size_t count = 0;
  double duration = 0.0;  // seconds per job, one slot each
};

/// Scripted out-of-band termination of an instance (operator action or a
/// spot reclaim), independent of the autoscaler.
struct ForcedTermination {
  double time = 0.0;
  std::string instance_id;
};

struct ElasticScenario {
  std::vector<Submission> script;
  std::vector<ForcedTermination> terminations;
  ElastiqConfig elastiq;
  cloud::CloudConfig cloud;
  std::uint64_t seed = 1;
  double horizon = 30.0 * 86400.0;  // hard stop, seconds
  bool record_trace = false;

  void validate() const;
};

struct TimelineRow {
  double time = 0.0;
  std::size_t running = 0;
  std::size_t pending = 0;
  std::size_t waiting_jobs = 0;
  std::string action;
  std::string detail;
};

/// One autoscaler evaluation, for property checks.
struct TickRecord {
  double time = 0.0;
  std::size_t running = 0;        // before actions
  std::size_t in_flight = 0;      // before actions
  std::size_t waiting = 0;        // all waiting jobs
  std::size_t waiting_long = 0;   // past the waiting-time threshold
  std::size_t requested = 0;      // VMs asked for this tick
  std::size_t granted = 0;
  std::size_t shutdowns = 0;
  std::size_t running_after = 0;  // registered, after shutdowns
  std::size_t in_flight_after = 0;
};

struct JobRecord {
  std::uint64_t id = 0;
  double submit_time = 0.0;
  double duration = 0.0;
  std::optional<double> first_start;
  std::optional<double> start_time;  // of the successful run
  std::optional<double> finish_time;
  std::optional<std::string> node;
  std::size_t restarts = 0;
};

struct ElasticReport {
  std::vector<TimelineRow> timeline;
  std::vector<TickRecord> ticks;
  std::vector<JobRecord> jobs;
  std::vector<cloud::VmInstance> instances;
  std::vector<sim::TraceRecord> trace;
  bool drained = false;
  double drain_time = 0.0;  // last job completion
  double end_time = 0.0;
  std::size_t vms_requested = 0;
  std::size_t vms_granted = 0;
  std::size_t request_failures = 0;
  std::size_t peak_fleet = 0;
  double completed_work = 0.0;  // job-seconds of successful runs
  double lost_work = 0.0;       // job-seconds discarded by requeues
};

/// Closed loop: submissions -> queue -> autoscaler polls -> cloud boots ->
/// nodes register and take waiting jobs first-come-first-served -> idle
/// nodes are reaped. Runs until the system is quiescent or the horizon.
ElasticReport run_elastic_scenario(const ElasticScenario& scenario);

}  // namespace vaf::autoscale
