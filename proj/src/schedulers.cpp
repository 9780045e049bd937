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

#include "vaf/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>

#include "vaf/errors.hpp"

namespace vaf::sched {

using sim::EventKind;

void Workload::validate() const {
  if (!std::isfinite(total_work) || total_work <= 0.0) {
    throw InputError("workload total_work must be finite and > 0");
  }
  if (!std::isfinite(packet_target) || packet_target <= 0.0) {
    throw InputError("workload packet_target must be finite and > 0");
  }
  double sum = 0.0;
  std::set<std::string> seen;
  for (const auto& share : locality) {
    if (share.node.empty() || !seen.insert(share.node).second) {
      throw InputError("locality node names must be non-empty and unique");
    }
    if (!std::isfinite(share.fraction) || share.fraction < 0.0) {
      throw InputError("locality fraction for '" + share.node + "' must be >= 0");
    }
    sum += share.fraction;
  }
  if (sum > 1.0 + 1e-12) {
    throw InputError("locality fractions sum to more than 1");
  }
}

const char* to_string(WorkerState state) {
  switch (state) {
    case WorkerState::kAnnounced: return "announced";
    case WorkerState::kInitializing: return "initializing";
    case WorkerState::kIdle: return "idle";
    case WorkerState::kBusy: return "busy";
    case WorkerState::kDone: return "done";
  }
  return "unknown";
}

PullMaster::PullMaster(Workload workload) : workload_(std::move(workload)) {
  workload_.validate();
  double located = 0.0;
  for (const auto& share : workload_.locality) {
    const double work = share.fraction * workload_.total_work;
    located += work;
    if (work > 0.0) {
      sources_.push_back(Source{share.node, work, 0.0});
    }
  }
  const double free_work = workload_.total_work - located;
  if (free_work > 0.0) {
    sources_.push_back(Source{std::nullopt, free_work, 0.0});
  }
}

PullMaster::Slot& PullMaster::slot(const std::string& worker_id) {
  auto it = workers_.find(worker_id);
  if (it == workers_.end()) {
    throw SimulationLogicError("unknown worker '" + worker_id + "'");
  }
  return it->second;
}

const PullMaster::Slot& PullMaster::slot(const std::string& worker_id) const {
  return const_cast<PullMaster*>(this)->slot(worker_id);
}

const WorkerRecord& PullMaster::worker(const std::string& worker_id) const {
  return slot(worker_id).record;
}

const WorkerStats& PullMaster::stats(const std::string& worker_id) const {
  return slot(worker_id).stats;
}

double PullMaster::remaining() const {
  double total = 0.0;
  for (const auto& s : sources_) {
    total += s.remaining();
  }
  return total;
}

void PullMaster::add_worker(WorkerRecord worker, double now) {
  if (workers_.contains(worker.id)) {
    throw InputError("worker '" + worker.id + "' was already added");
  }
  if (!std::isfinite(worker.speed) || worker.speed <= 0.0) {
    throw InputError("worker '" + worker.id + "' speed must be > 0");
  }
  if (!std::isfinite(worker.init_duration) || worker.init_duration < 0.0) {
    throw InputError("worker '" + worker.id + "' init_duration must be >= 0");
  }
  worker.state = WorkerState::kAnnounced;
  Slot s;
  s.stats.id = worker.id;
  s.stats.arrival_time = now;
  s.record = std::move(worker);
  const std::string id = s.record.id;
  workers_.emplace(id, std::move(s));
  order_.push_back(id);
  announced_.push_back(id);
}

std::vector<std::string> PullMaster::discover(double /*now*/) {
  std::vector<std::string> wave;
  wave.swap(announced_);
  for (const auto& id : wave) {
    auto& s = slot(id);
    s.record.state = WorkerState::kInitializing;
    s.stats.init_seconds = s.record.init_duration;
  }
  return wave;
}

void PullMaster::mark_ready(const std::string& worker_id, double now) {
  auto& s = slot(worker_id);
  if (s.record.state != WorkerState::kInitializing) {
    throw SimulationLogicError("worker '" + worker_id + "' is " + to_string(s.record.state) +
                               ", not initializing");
  }
  s.record.state = WorkerState::kIdle;
  s.stats.ready_time = now;
}

PullMaster::Source* PullMaster::pick_source(const WorkerRecord& worker) {
  Source* free_source = nullptr;
  Source* remote = nullptr;
  for (auto& src : sources_) {
    if (src.remaining() <= 0.0) {
      continue;
    }
    if (src.location && worker.local_node && *src.location == *worker.local_node) {
      return &src;
    }
    if (!src.location) {
      free_source = &src;
    } else if (!remote) {
      remote = &src;
    }
  }
  return free_source ? free_source : remote;
}

std::variant<Packet, Done> PullMaster::next_packet(const std::string& worker_id, double now) {
  auto& s = slot(worker_id);
  if (s.record.state != WorkerState::kIdle) {
    throw SimulationLogicError("worker '" + worker_id + "' requested a packet while " +
                               to_string(s.record.state));
  }
  Source* src = pick_source(s.record);
  if (!src) {
    s.record.state = WorkerState::kDone;
    return Done{};
  }
  const double nominal = workload_.packet_target * s.record.speed;
  const double left = src->remaining();
  // The last packet of a source takes exactly what is left.
  const double work = nominal < left ? nominal : left;
  src->granted = work == left ? src->total : src->granted + work;
  granted_total_ += work;

  Packet packet{next_packet_id_++, work, src->location};
  packets_.push_back(packet);
  s.record.state = WorkerState::kBusy;
  s.current = packet;
  s.busy_since = now;
  return packet;
}

void PullMaster::complete_packet(const std::string& worker_id, double now) {
  auto& s = slot(worker_id);
  if (s.record.state != WorkerState::kBusy || !s.current) {
    throw SimulationLogicError("worker '" + worker_id + "' completed a packet while " +
                               to_string(s.record.state));
  }
  s.stats.busy_seconds += now - s.busy_since;
  s.stats.work += s.current->work;
  ++s.stats.packets;
  s.current.reset();
  s.record.state = WorkerState::kIdle;
}

namespace {

void finish_idle_accounting(std::vector<WorkerStats>& workers, double time_to_results) {
  for (auto& w : workers) {
    if (w.ready_time && *w.ready_time < time_to_results) {
      w.idle_seconds = std::max(0.0, time_to_results - *w.ready_time - w.busy_seconds);
    }
  }
}

std::string fmt_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

}  // namespace

CompletionReport simulate_pull(const Workload& workload, std::span<const WorkerRecord> arrivals,
                               const PullConfig& config) {
  workload.validate();
  if (arrivals.empty()) {
    throw InputError("pull simulation needs at least one worker");
  }
  if (!std::isfinite(config.master_poll_interval) || config.master_poll_interval < 0.0) {
    throw InputError("master_poll_interval must be >= 0");
  }
  {
    std::set<std::string> ids;
    for (const auto& w : arrivals) {
      if (!ids.insert(w.id).second) {
        throw InputError("worker '" + w.id + "' appears twice in the arrival list");
      }
      if (!std::isfinite(w.arrival_time) || w.arrival_time < 0.0) {
        throw InputError("worker '" + w.id + "' arrival_time must be >= 0");
      }
    }
  }

  sim::Simulation simulation;
  simulation.enable_trace(config.record_trace);
  PullMaster master(workload);
  std::size_t not_arrived = arrivals.size();
  std::size_t outstanding_packets = 0;
  double time_to_results = 0.0;

  // Request a packet for `id` and schedule its completion.
  std::function<void(const std::string&)> request = [&](const std::string& id) {
    auto next = master.next_packet(id, simulation.now());
    if (const auto* packet = std::get_if<Packet>(&next)) {
      ++outstanding_packets;
      const double duration = packet->work / master.worker(id).speed;
      simulation.schedule_in(duration, EventKind::kPacketDone,
                             id + " packet " + std::to_string(packet->id), [&, id] {
                               master.complete_packet(id, simulation.now());
                               --outstanding_packets;
                               time_to_results = std::max(time_to_results, simulation.now());
                               request(id);
                             });
    }
  };

  auto start_wave = [&] {
    for (const auto& id : master.discover(simulation.now())) {
      simulation.schedule_in(master.worker(id).init_duration, EventKind::kWorkerReady, id,
                             [&, id] {
                               master.mark_ready(id, simulation.now());
                               request(id);
                             });
    }
  };

  for (const auto& w : arrivals) {
    simulation.schedule(w.arrival_time, EventKind::kWorkerArrival, w.id, [&, w] {
      master.add_worker(w, simulation.now());
      --not_arrived;
      if (config.master_poll_interval == 0.0) {
        start_wave();
      }
    });
  }

  std::function<void()> poll = [&] {
    start_wave();
    if (not_arrived > 0 || master.has_announced()) {
      simulation.schedule_in(config.master_poll_interval, EventKind::kMasterPoll,
                             fmt_time(simulation.now() + config.master_poll_interval), poll);
    }
  };
  if (config.master_poll_interval > 0.0) {
    simulation.schedule(0.0, EventKind::kMasterPoll, "0", poll);
  }

  simulation.run();

  if (outstanding_packets != 0 || master.remaining() > 0.0) {
    std::ostringstream os;
    os << "pull simulation ended with " << master.remaining() << " core-seconds unprocessed";
    throw SimulationLogicError(os.str());
  }

  CompletionReport report;
  report.time_to_results = time_to_results;
  report.packets = master.packets();
  report.packets_granted = report.packets.size();
  for (const auto& p : report.packets) {
    report.serialized_work += p.work;
  }
  for (const auto& id : master.worker_order()) {
    report.workers.push_back(master.stats(id));
  }
  finish_idle_accounting(report.workers, time_to_results);
  report.trace = simulation.trace();
  return report;
}

CompletionReport simulate_push(const Workload& workload, std::span<const WorkerRecord> arrivals,
                               std::size_t n_jobs, bool record_trace) {
  workload.validate();
  if (n_jobs < 1) {
    throw InputError("push simulation needs at least one job");
  }
  if (arrivals.size() < n_jobs) {
    throw InputError("push simulation has " + std::to_string(arrivals.size()) +
                     " arrivals for " + std::to_string(n_jobs) + " jobs");
  }
  std::vector<WorkerRecord> ordered(arrivals.begin(), arrivals.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.arrival_time < b.arrival_time; });
  ordered.resize(n_jobs);

  sim::Simulation simulation;
  simulation.enable_trace(record_trace);
  CompletionReport report;
  const double chunk = workload.total_work / static_cast<double>(n_jobs);
  double granted = 0.0;
  for (std::size_t k = 0; k < n_jobs; ++k) {
    const auto& w = ordered[k];
    if (!std::isfinite(w.speed) || w.speed <= 0.0) {
      throw InputError("worker '" + w.id + "' speed must be > 0");
    }
    const double work = k + 1 == n_jobs ? workload.total_work - granted : chunk;
    granted += work;
    report.packets.push_back(Packet{k, work, std::nullopt});

    WorkerStats stats;
    stats.id = w.id;
    stats.arrival_time = w.arrival_time;
    stats.ready_time = w.arrival_time + w.init_duration;
    stats.init_seconds = w.init_duration;
    stats.busy_seconds = work / w.speed;
    stats.work = work;
    stats.packets = 1;
    report.workers.push_back(stats);

    const double finish = *stats.ready_time + stats.busy_seconds;
    simulation.schedule(w.arrival_time, EventKind::kWorkerArrival, w.id, [&, finish, id = w.id] {
      simulation.schedule(finish, EventKind::kJobDone, id, [&] {
        report.time_to_results = std::max(report.time_to_results, simulation.now());
      });
    });
  }
  simulation.run();

  report.packets_granted = report.packets.size();
  report.serialized_work = granted;
  finish_idle_accounting(report.workers, report.time_to_results);
  report.trace = simulation.trace();
  return report;
}

std::vector<WorkerRecord> rampup_arrivals(const model::RampUpParams& params, std::size_t count,
                                          double init_duration, double speed) {
  params.validate();
  std::vector<WorkerRecord> out;
  for (std::size_t k = 1; k <= count; ++k) {
    const double n = static_cast<double>(k);
    if (params.p1 > 0.0 && n >= params.max_jobs()) {
      break;
    }
    char id[16];
    std::snprintf(id, sizeof id, "w%04zu", k);
    WorkerRecord w;
    w.id = id;
    w.arrival_time = model::rampup_time(params, n);
    w.init_duration = init_duration;
    w.speed = speed;
    out.push_back(std::move(w));
  }
  return out;
}

std::size_t push_job_count(const model::RampUpParams& params, double total_work) {
  const double n = std::round(model::optimal_job_count(params, total_work));
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace vaf::sched
