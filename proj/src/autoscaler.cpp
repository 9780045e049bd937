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

#include "vaf/autoscaler.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vaf/errors.hpp"

namespace vaf::autoscale {

void ElastiqConfig::validate() const {
  if (!std::isfinite(poll_interval) || poll_interval <= 0.0) {
    throw InputError("elastiq.poll_interval must be > 0");
  }
  if (waiting_jobs_threshold < 1) {
    throw InputError("elastiq.waiting_jobs_threshold must be >= 1");
  }
  if (!std::isfinite(waiting_time_threshold) || waiting_time_threshold < 0.0) {
    throw InputError("elastiq.waiting_time_threshold must be >= 0");
  }
  if (jobs_per_vm < 1) {
    throw InputError("elastiq.jobs_per_vm must be >= 1");
  }
  if (!std::isfinite(idle_time_threshold) || idle_time_threshold < 0.0) {
    throw InputError("elastiq.idle_time_threshold must be >= 0");
  }
  if (max_quota < min_quota) {
    throw InputError("elastiq.max_quota must be >= elastiq.min_quota");
  }
}

std::string describe(const ScaleAction& action) {
  if (const auto* r = std::get_if<RequestVMs>(&action)) {
    return "request " + std::to_string(r->count);
  }
  return "shutdown " + std::get<ShutdownVM>(action).node_id;
}

namespace {

void check_snapshot(const QueueSnapshot& snapshot, const FleetView& fleet, double now) {
  if (snapshot.nodes.size() > fleet.running) {
    throw InputError("snapshot lists more nodes than the fleet has running");
  }
  std::set<std::string> ids;
  for (const auto& node : snapshot.nodes) {
    if (!ids.insert(node.id).second) {
      throw InputError("node '" + node.id + "' listed twice");
    }
    const bool idle = node.running_jobs == 0;
    if (idle != node.idle_since.has_value()) {
      throw InputError("node '" + node.id + "' idle-since must be set iff it runs no jobs");
    }
    if (node.idle_since && *node.idle_since > now) {
      throw InputError("node '" + node.id + "' idle since the future");
    }
  }
  for (const auto& job : snapshot.waiting_jobs) {
    if (job.waiting_since > now) {
      throw InputError("job " + std::to_string(job.id) + " waiting since the future");
    }
  }
}

}  // namespace

std::vector<ScaleAction> evaluate(const ElastiqConfig& config, const QueueSnapshot& snapshot,
                                  const FleetView& fleet, double now) {
  config.validate();
  check_snapshot(snapshot, fleet, now);

  const auto waiting_long = static_cast<std::int64_t>(std::count_if(
      snapshot.waiting_jobs.begin(), snapshot.waiting_jobs.end(), [&](const WaitingJob& job) {
        return now - job.waiting_since > config.waiting_time_threshold;
      }));
  const auto in_flight = static_cast<std::int64_t>(fleet.pending_or_booting);
  const auto total = static_cast<std::int64_t>(fleet.running) + in_flight;
  const auto jobs_per_vm = static_cast<std::int64_t>(config.jobs_per_vm);

  std::int64_t wanted = 0;
  if (waiting_long >= static_cast<std::int64_t>(config.waiting_jobs_threshold)) {
    wanted = (waiting_long + jobs_per_vm - 1) / jobs_per_vm - in_flight;
  }
  // Proactive floor: boot up to min_quota even with an empty queue.
  wanted = std::max(wanted, static_cast<std::int64_t>(config.min_quota) - total);
  wanted = std::min(wanted, static_cast<std::int64_t>(config.max_quota) - total);
  if (wanted >= 1) {
    return {RequestVMs{static_cast<std::size_t>(wanted)}};
  }

  std::vector<const NodeStatus*> idle;
  for (const auto& node : snapshot.nodes) {
    if (node.idle_since && now - *node.idle_since >= config.idle_time_threshold) {
      idle.push_back(&node);
    }
  }
  std::sort(idle.begin(), idle.end(), [](const NodeStatus* a, const NodeStatus* b) {
    return *a->idle_since != *b->idle_since ? *a->idle_since < *b->idle_since : a->id < b->id;
  });
  const std::size_t removable =
      fleet.running > config.min_quota ? fleet.running - config.min_quota : 0;
  std::vector<ScaleAction> actions;
  for (std::size_t i = 0; i < idle.size() && i < removable; ++i) {
    actions.emplace_back(ShutdownVM{idle[i]->id});
  }
  return actions;
}

ApplyReport apply(const std::vector<ScaleAction>& actions, cloud::Cloud& cloud) {
  ApplyReport report;
  for (const auto& action : actions) {
    AppliedAction entry{action, false, {}, {}};
    try {
      if (const auto* request = std::get_if<RequestVMs>(&action)) {
        entry.granted = cloud.request_instances(request->count);
        report.granted += entry.granted.size();
      } else {
        cloud.terminate_instance(std::get<ShutdownVM>(action).node_id);
      }
      entry.ok = true;
    } catch (const cloud::CloudRequestError& e) {
      entry.error = e.what();
    } catch (const InputError& e) {
      entry.error = e.what();
    }
    report.failures += !entry.ok;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace vaf::autoscale
