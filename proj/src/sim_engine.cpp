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

#include "vaf/sim_engine.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vaf/errors.hpp"

namespace vaf::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kWorkerArrival: return "worker-arrival";
    case EventKind::kWorkerReady: return "worker-ready";
    case EventKind::kPacketDone: return "packet-done";
    case EventKind::kMasterPoll: return "master-poll";
    case EventKind::kJobSubmit: return "job-submit";
    case EventKind::kJobDone: return "job-done";
    case EventKind::kAutoscalerPoll: return "autoscaler-poll";
    case EventKind::kVmDeployed: return "vm-deployed";
    case EventKind::kVmBootComplete: return "vm-boot-complete";
    case EventKind::kNodeRegistered: return "node-registered";
    case EventKind::kShutdownComplete: return "shutdown-complete";
    case EventKind::kUser: return "user";
  }
  return "unknown";
}

EventHandle Simulation::schedule(double time, EventKind kind, std::string detail, Action action) {
  if (!std::isfinite(time) || time < now_) {
    std::ostringstream os;
    os << "event '" << to_string(kind) << "' scheduled at " << time << " before clock " << now_;
    throw SimulationLogicError(os.str());
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Entry{time, seq, kind, std::move(detail), std::move(action)});
  pending_.insert(seq);
  ++live_;
  return EventHandle{seq};
}

bool Simulation::cancel(EventHandle handle) {
  if (pending_.erase(handle.seq) == 0) {
    return false;
  }
  --live_;
  return true;
}

void Simulation::drop_cancelled_head() {
  while (!queue_.empty() && !pending_.contains(queue_.top().seq)) {
    queue_.pop();
  }
}

bool Simulation::step() {
  drop_cancelled_head();
  if (queue_.empty()) {
    return false;
  }
  // priority_queue::top is const; the entry is discarded right after.
  Entry entry = std::move(const_cast<Entry&>(queue_.top()));
  queue_.pop();
  pending_.erase(entry.seq);
  --live_;
  now_ = entry.time;
  ++processed_;
  if (tracing_) {
    trace_.push_back(TraceRecord{entry.time, entry.seq, entry.kind, entry.detail});
  }
  if (entry.action) {
    entry.action();
  }
  return true;
}

RunStats Simulation::run_until(double stop) {
  const std::uint64_t before = processed_;
  for (;;) {
    drop_cancelled_head();
    if (queue_.empty() || queue_.top().time > stop) {
      break;
    }
    step();
  }
  return RunStats{now_, processed_ - before};
}

RunStats Simulation::run_until(const std::function<bool()>& stop) {
  const std::uint64_t before = processed_;
  while (!stop() && step()) {
  }
  return RunStats{now_, processed_ - before};
}

RunStats Simulation::run() {
  const std::uint64_t before = processed_;
  while (step()) {
  }
  return RunStats{now_, processed_ - before};
}

std::string Simulation::trace_csv() const {
  std::string out = "time,seq,kind,detail\n";
  char buf[64];
  for (const auto& r : trace_) {
    std::snprintf(buf, sizeof buf, "%.17g", r.time);
    out += buf;
    out += ',';
    out += std::to_string(r.seq);
    out += ',';
    out += to_string(r.kind);
    out += ',';
    out += r.detail;
    out += '\n';
  }
  return out;
}

}  // namespace vaf::sim
