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
#include <functional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

// Single-threaded discrete-event kernel. Events fire in (time, seq) order,
// where seq is the insertion counter, so runs are reproducible bit for bit.

namespace vaf::sim {

enum class EventKind {
  kWorkerArrival,
  kWorkerReady,
  kPacketDone,
  kMasterPoll,
  kJobSubmit,
  kJobDone,
  kAutoscalerPoll,
  kVmDeployed,
  kVmBootComplete,
  kNodeRegistered,
  kShutdownComplete,
  kUser,
};

std::string_view to_string(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
};

struct TraceRecord {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kUser;
  std::string detail;

  bool operator==(const TraceRecord&) const = default;
};

struct RunStats {
  double final_time = 0.0;
  std::uint64_t events_processed = 0;
};

class Simulation {
 public:
  using Action = std::function<void()>;

  double now() const { return now_; }

  /// Enqueues an event at absolute `time`. Throws SimulationLogicError when
  /// `time` is earlier than the clock.
  EventHandle schedule(double time, EventKind kind, std::string detail, Action action);
  EventHandle schedule_in(double delay, EventKind kind, std::string detail, Action action) {
    return schedule(now_ + delay, kind, std::move(detail), std::move(action));
  }

  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle handle);

  /// Processes events with time <= stop.
  RunStats run_until(double stop);
  /// Processes events until `stop()` is true (checked before each event) or
  /// the queue is empty.
  RunStats run_until(const std::function<bool()>& stop);
  RunStats run();

  bool empty() const { return live_ == 0; }
  std::uint64_t events_processed() const { return processed_; }

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<TraceRecord>& trace() const { return trace_; }

  /// `time,seq,kind,detail` rows, header included.
  std::string trace_csv() const;

 private:
  struct Entry {
    double time;
    std::uint64_t seq;
    EventKind kind;
    std::string detail;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  bool step();
  void drop_cancelled_head();

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::unordered_set<std::uint64_t> pending_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::size_t live_ = 0;
  bool tracing_ = false;
  std::vector<TraceRecord> trace_;
};

}  // namespace vaf::sim
