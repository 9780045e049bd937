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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vaf/analytic_model.hpp"
#include "vaf/sim_engine.hpp"

// Pull (packetizer) and push (pre-split independent jobs) execution of one
// divisible workload over a schedule of worker arrivals.

namespace vaf::sched {

struct LocalityShare {
  std::string node;
  double fraction = 0.0;
};

struct Workload {
  double total_work = 0.0;      // core-seconds at reference speed
  double packet_target = 20.0;  // target packet duration, seconds
  /// Work fractions stored on named nodes; whatever is left is location-free.
  std::vector<LocalityShare> locality;

  void validate() const;
};

struct Packet {
  std::uint64_t id = 0;
  double work = 0.0;
  std::optional<std::string> location;
};

/// Returned by next_packet once all work has been handed out.
struct Done {};

enum class WorkerState { kAnnounced, kInitializing, kIdle, kBusy, kDone };

const char* to_string(WorkerState state);

struct WorkerRecord {
  std::string id;
  double arrival_time = 0.0;
  double init_duration = 0.0;
  double speed = 1.0;
  std::optional<std::string> local_node;
  WorkerState state = WorkerState::kAnnounced;
};

struct WorkerStats {
  std::string id;
  double arrival_time = 0.0;
  std::optional<double> ready_time;  // unset if never initialized
  double init_seconds = 0.0;
  double busy_seconds = 0.0;
  double idle_seconds = 0.0;  // between ready time and time to results
  double work = 0.0;
  std::size_t packets = 0;
};

struct CompletionReport {
  double time_to_results = 0.0;
  std::vector<WorkerStats> workers;
  std::size_t packets_granted = 0;
  double serialized_work = 0.0;
  std::vector<Packet> packets;  // in grant order
  std::vector<sim::TraceRecord> trace;
};

struct PullConfig {
  /// Period of the master's scan of newly announced workers. Zero means
  /// workers are discovered the moment they are announced.
  double master_poll_interval = 10.0;
  bool record_trace = false;
};

/// The packetizer: owns the remaining work and the worker table of one run.
class PullMaster {
 public:
  explicit PullMaster(Workload workload);

  /// Puts a worker on the announced list. Duplicate ids are an InputError.
  void add_worker(WorkerRecord worker, double now);

  /// Poll tick: every announced worker starts initializing, as one wave.
  /// Returns their ids in announcement order.
  std::vector<std::string> discover(double now);

  /// initializing -> idle.
  void mark_ready(const std::string& worker_id, double now);

  /// Hands an idle worker its next packet, or Done when nothing is left
  /// (the worker is then done). Local packets are preferred, then
  /// location-free ones, then other nodes' packets.
  std::variant<Packet, Done> next_packet(const std::string& worker_id, double now);

  /// busy -> idle after the worker's current packet.
  void complete_packet(const std::string& worker_id, double now);

  double remaining() const;
  double granted() const { return granted_total_; }
  bool has_announced() const { return !announced_.empty(); }
  const WorkerRecord& worker(const std::string& worker_id) const;
  const std::vector<Packet>& packets() const { return packets_; }
  const std::vector<std::string>& worker_order() const { return order_; }
  const WorkerStats& stats(const std::string& worker_id) const;

 private:
  struct Source {
    std::optional<std::string> location;
    double total = 0.0;
    double granted = 0.0;
    double remaining() const { return total - granted; }
  };
  struct Slot {
    WorkerRecord record;
    WorkerStats stats;
    std::optional<Packet> current;
    double busy_since = 0.0;
  };

  Slot& slot(const std::string& worker_id);
  const Slot& slot(const std::string& worker_id) const;
  Source* pick_source(const WorkerRecord& worker);

  Workload workload_;
  std::vector<Source> sources_;
  std::map<std::string, Slot> workers_;
  std::vector<std::string> order_;
  std::vector<std::string> announced_;
  std::vector<Packet> packets_;
  double granted_total_ = 0.0;
  std::uint64_t next_packet_id_ = 0;
};

/// Runs arrivals -> poll discovery -> init -> request/complete cycles until
/// every packet is processed. Throws InputError when `arrivals` is empty.
CompletionReport simulate_pull(const Workload& workload, std::span<const WorkerRecord> arrivals,
                               const PullConfig& config = {});

/// Splits the work into `n_jobs` equal chunks; job k starts on the k-th
/// arrival and runs its chunk to completion.
CompletionReport simulate_push(const Workload& workload, std::span<const WorkerRecord> arrivals,
                               std::size_t n_jobs, bool record_trace = false);

/// Worker k (1-based) arrives when the ramp-up curve reaches k running jobs.
/// Stops at `count` workers or at the site's job ceiling, whichever is first.
std::vector<WorkerRecord> rampup_arrivals(const model::RampUpParams& params, std::size_t count,
                                          double init_duration = 0.0, double speed = 1.0);

/// Number of push jobs for a workload: the model optimum rounded to the
/// nearest integer, at least 1.
std::size_t push_job_count(const model::RampUpParams& params, double total_work);

}  // namespace vaf::sched
