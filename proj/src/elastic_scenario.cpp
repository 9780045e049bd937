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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vaf/autoscaler.hpp"
#include "vaf/errors.hpp"

namespace vaf::autoscale {

using sim::EventKind;

void ElasticScenario::validate() const {
  elastiq.validate();
  cloud.validate();
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& s = script[i];
    const std::string where = "submission " + std::to_string(i + 1);
    if (!std::isfinite(s.time) || s.time < 0.0) {
      throw InputError(where + ": time must be >= 0");
    }
    if (s.count < 1) {
      throw InputError(where + ": job count must be >= 1");
    }
    if (!std::isfinite(s.duration) || s.duration <= 0.0) {
      throw InputError(where + ": job duration must be > 0");
    }
  }
  for (const auto& kill : terminations) {
    if (!std::isfinite(kill.time) || kill.time < 0.0) {
      throw InputError("termination of '" + kill.instance_id + "': time must be >= 0");
    }
  }
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw InputError("scenario horizon must be > 0");
  }
}

namespace {

struct Node {
  int slots = 0;
  std::set<std::uint64_t> jobs;
  std::optional<double> idle_since;
};

class ElasticLoop {
 public:
  explicit ElasticLoop(const ElasticScenario& scenario)
      : scenario_(scenario), cloud_(scenario.cloud, simulation_, scenario.seed) {
    simulation_.enable_trace(scenario.record_trace);
    cloud_.on_register([this](const cloud::NodeRegistration& r) { on_register(r); });
    cloud_.on_deregister([this](const std::string& id) { on_deregister(id); });
  }

  ElasticReport run() {
    for (const auto& submission : scenario_.script) {
      ++unsubmitted_;
      simulation_.schedule(submission.time, EventKind::kJobSubmit,
                           std::to_string(submission.count) + " jobs",
                           [this, submission] { submit(submission); });
    }
    for (const auto& kill : scenario_.terminations) {
      simulation_.schedule(kill.time, EventKind::kUser, "terminate " + kill.instance_id,
                           [this, id = kill.instance_id] { force_terminate(id); });
    }
    simulation_.schedule(0.0, EventKind::kAutoscalerPoll, "", [this] { poll(); });
    simulation_.run_until(scenario_.horizon);

    report_.jobs = jobs_;
    report_.instances = cloud_.instances();
    report_.trace = simulation_.trace();
    report_.end_time = simulation_.now();
    report_.vms_granted = cloud_.granted_total();
    report_.peak_fleet = cloud_.peak_existing();
    report_.drained = unsubmitted_ == 0 && waiting_.empty() && running_jobs_.empty();
    for (const auto& job : jobs_) {
      if (!job.finish_time) {
        report_.drained = false;
      } else {
        report_.drain_time = std::max(report_.drain_time, *job.finish_time);
      }
    }
    return std::move(report_);
  }

 private:
  void row(std::string action, std::string detail) {
    report_.timeline.push_back(TimelineRow{simulation_.now(), cloud_.registered(),
                                           cloud_.in_flight(), waiting_.size(),
                                           std::move(action), std::move(detail)});
  }

  void submit(const Submission& submission) {
    --unsubmitted_;
    for (std::size_t i = 0; i < submission.count; ++i) {
      JobRecord job;
      job.id = jobs_.size() + 1;
      job.submit_time = simulation_.now();
      job.duration = submission.duration;
      enqueue(job.id, job.submit_time);
      jobs_.push_back(job);
    }
    row("submit", std::to_string(submission.count) + " jobs");
    dispatch();
  }

  void enqueue(std::uint64_t id, double submit_time) {
    waiting_.insert({submit_time, id});
    waiting_since_[id] = simulation_.now();
  }

  JobRecord& job(std::uint64_t id) { return jobs_[id - 1]; }

  // First-come-first-served: the oldest submission takes the first free slot.
  void dispatch() {
    while (!waiting_.empty()) {
      auto free_node = std::find_if(nodes_.begin(), nodes_.end(), [](const auto& entry) {
        return static_cast<int>(entry.second.jobs.size()) < entry.second.slots;
      });
      if (free_node == nodes_.end()) {
        return;
      }
      const auto [submit_time, id] = *waiting_.begin();
      waiting_.erase(waiting_.begin());
      waiting_since_.erase(id);

      Node& node = free_node->second;
      node.jobs.insert(id);
      node.idle_since.reset();
      auto& record = job(id);
      record.start_time = simulation_.now();
      if (!record.first_start) {
        record.first_start = simulation_.now();
      }
      record.node = free_node->first;
      const std::string node_id = free_node->first;
      running_jobs_[id] = simulation_.schedule_in(
          record.duration, EventKind::kJobDone, "job " + std::to_string(id),
          [this, id, node_id] { finish(id, node_id); });
    }
  }

  void finish(std::uint64_t id, const std::string& node_id) {
    running_jobs_.erase(id);
    auto& record = job(id);
    record.finish_time = simulation_.now();
    report_.completed_work += record.duration;
    auto& node = nodes_.at(node_id);
    node.jobs.erase(id);
    if (node.jobs.empty()) {
      node.idle_since = simulation_.now();
    }
    row("job-done", "job " + std::to_string(id));
    dispatch();
  }

  void on_register(const cloud::NodeRegistration& registration) {
    nodes_[registration.node_id] = Node{registration.slots, {}, registration.time};
    row("register", registration.node_id);
    dispatch();
  }

  // A node vanished under its jobs: they go back to the queue and restart.
  void on_deregister(const std::string& node_id) {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end()) {
      return;
    }
    const std::set<std::uint64_t> orphans = it->second.jobs;
    nodes_.erase(it);
    for (std::uint64_t id : orphans) {
      simulation_.cancel(running_jobs_.at(id));
      running_jobs_.erase(id);
      auto& record = job(id);
      report_.lost_work += simulation_.now() - *record.start_time;
      record.start_time.reset();
      record.node.reset();
      ++record.restarts;
      enqueue(id, record.submit_time);
    }
    row("deregister", node_id + " requeued=" + std::to_string(orphans.size()));
    dispatch();
  }

  void force_terminate(const std::string& instance_id) {
    try {
      cloud_.terminate_instance(instance_id);
      row("terminate", instance_id);
    } catch (const InputError& e) {
      row("terminate-error", e.what());
    }
  }

  void poll() {
    const double now = simulation_.now();
    QueueSnapshot snapshot;
    for (const auto& [submit_time, id] : waiting_) {
      snapshot.waiting_jobs.push_back(WaitingJob{id, waiting_since_.at(id)});
    }
    for (const auto& [id, node] : nodes_) {
      snapshot.nodes.push_back(NodeStatus{id, node.jobs.size(), node.idle_since});
    }
    const FleetView fleet{cloud_.registered(), cloud_.in_flight()};
    const auto actions = evaluate(scenario_.elastiq, snapshot, fleet, now);

    TickRecord tick;
    tick.time = now;
    tick.running = fleet.running;
    tick.in_flight = fleet.pending_or_booting;
    tick.waiting = snapshot.waiting_jobs.size();
    for (const auto& w : snapshot.waiting_jobs) {
      tick.waiting_long += now - w.waiting_since > scenario_.elastiq.waiting_time_threshold;
    }
    row("poll", "waiting_long=" + std::to_string(tick.waiting_long));

    const ApplyReport applied = apply(actions, cloud_);
    for (const auto& entry : applied.entries) {
      if (const auto* request = std::get_if<RequestVMs>(&entry.action)) {
        tick.requested += request->count;
        report_.vms_requested += request->count;
        if (entry.ok) {
          std::string ids;
          for (const auto& id : entry.granted) {
            ids += (ids.empty() ? "" : ";") + id;
          }
          row("request", "count=" + std::to_string(request->count) + " granted=" + ids);
        } else {
          ++report_.request_failures;
          row("request-error", "count=" + std::to_string(request->count) + " " + entry.error);
        }
      } else {
        const auto& node_id = std::get<ShutdownVM>(entry.action).node_id;
        tick.shutdowns += entry.ok;
        row(entry.ok ? "shutdown" : "shutdown-error",
            entry.ok ? node_id : node_id + " " + entry.error);
      }
    }
    tick.granted = applied.granted;
    tick.running_after = cloud_.registered();
    tick.in_flight_after = cloud_.in_flight();
    report_.ticks.push_back(tick);

    const bool quiescent = unsubmitted_ == 0 && waiting_.empty() && running_jobs_.empty() &&
                           actions.empty() && cloud_.in_flight() == 0 &&
                           cloud_.registered() <= scenario_.elastiq.min_quota;
    const double next = now + scenario_.elastiq.poll_interval;
    if (!quiescent && next <= scenario_.horizon) {
      simulation_.schedule(next, EventKind::kAutoscalerPoll, "", [this] { poll(); });
    }
  }

  const ElasticScenario& scenario_;
  sim::Simulation simulation_;
  cloud::Cloud cloud_;
  ElasticReport report_;
  std::vector<JobRecord> jobs_;
  std::set<std::pair<double, std::uint64_t>> waiting_;
  std::map<std::uint64_t, double> waiting_since_;
  std::map<std::uint64_t, sim::EventHandle> running_jobs_;
  std::map<std::string, Node> nodes_;
  std::size_t unsubmitted_ = 0;
};

}  // namespace

ElasticReport run_elastic_scenario(const ElasticScenario& scenario) {
  scenario.validate();
  ElasticLoop loop(scenario);
  return loop.run();
}

}  // namespace vaf::autoscale
