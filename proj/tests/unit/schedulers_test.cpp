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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vaf/analytic_model.hpp"
#include "vaf/errors.hpp"
#include "vaf/presets.hpp"
#include "vaf/rng.hpp"
#include "vaf/schedulers.hpp"

namespace vaf::sched {
namespace {

WorkerRecord worker(std::string id, double arrival, double init = 0.0, double speed = 1.0) {
  WorkerRecord w;
  w.id = std::move(id);
  w.arrival_time = arrival;
  w.init_duration = init;
  w.speed = speed;
  return w;
}

Workload workload(double total, double packet_target) {
  Workload w;
  w.total_work = total;
  w.packet_target = packet_target;
  return w;
}

PullMaster ready_master(Workload wl, WorkerRecord w) {
  PullMaster master(std::move(wl));
  const std::string id = w.id;
  master.add_worker(std::move(w), 0.0);
  master.discover(0.0);
  master.mark_ready(id, 0.0);
  return master;
}

TEST(NextPacket, TargetSizing) {
  auto master = ready_master(workload(100, 20), worker("a", 0));
  auto next = master.next_packet("a", 0.0);
  ASSERT_TRUE(std::holds_alternative<Packet>(next));
  EXPECT_DOUBLE_EQ(std::get<Packet>(next).work, 20.0);
  EXPECT_EQ(master.worker("a").state, WorkerState::kBusy);
}

TEST(NextPacket, SpeedScalesPacket) {
  auto master = ready_master(workload(100, 20), worker("a", 0, 0, 2.0));
  EXPECT_DOUBLE_EQ(std::get<Packet>(master.next_packet("a", 0.0)).work, 40.0);
}

TEST(NextPacket, RemainderThenDone) {
  auto master = ready_master(workload(7, 20), worker("a", 0));
  EXPECT_DOUBLE_EQ(std::get<Packet>(master.next_packet("a", 0.0)).work, 7.0);
  master.complete_packet("a", 7.0);
  EXPECT_TRUE(std::holds_alternative<Done>(master.next_packet("a", 7.0)));
  EXPECT_EQ(master.worker("a").state, WorkerState::kDone);
  EXPECT_EQ(master.remaining(), 0.0);
}

TEST(NextPacket, PrefersLocalWork) {
  Workload wl = workload(100, 10);
  wl.locality = {{"B", 0.5}, {"A", 0.5}};
  WorkerRecord w = worker("a", 0);
  w.local_node = "A";
  auto master = ready_master(wl, w);
  for (int i = 0; i < 5; ++i) {
    const auto packet = std::get<Packet>(master.next_packet("a", i * 10.0));
    EXPECT_EQ(packet.location, std::optional<std::string>("A"));
    master.complete_packet("a", i * 10.0 + 10.0);
  }
  // Local work exhausted: falls back to the remote node.
  EXPECT_EQ(std::get<Packet>(master.next_packet("a", 50.0)).location,
            std::optional<std::string>("B"));
}

TEST(NextPacket, LocationFreeBeforeRemote) {
  Workload wl = workload(100, 10);
  wl.locality = {{"B", 0.5}};
  WorkerRecord w = worker("a", 0);
  w.local_node = "A";
  auto master = ready_master(wl, w);
  EXPECT_FALSE(std::get<Packet>(master.next_packet("a", 0.0)).location.has_value());
}

TEST(NextPacket, RejectsBusyOrUninitializedWorkers) {
  PullMaster master(workload(100, 20));
  master.add_worker(worker("a", 0), 0.0);
  EXPECT_THROW(master.next_packet("a", 0.0), SimulationLogicError);
  master.discover(0.0);
  EXPECT_THROW(master.next_packet("a", 0.0), SimulationLogicError);
  master.mark_ready("a", 0.0);
  master.next_packet("a", 0.0);
  EXPECT_THROW(master.next_packet("a", 0.0), SimulationLogicError);
  EXPECT_THROW(master.next_packet("ghost", 0.0), SimulationLogicError);
}

TEST(AddWorker, DuplicateIdIsInputError) {
  PullMaster master(workload(100, 20));
  master.add_worker(worker("a", 0), 0.0);
  EXPECT_THROW(master.add_worker(worker("a", 5), 5.0), InputError);
}

TEST(AddWorker, DiscoveredAtNextPollThenInitialized) {
  const std::vector<WorkerRecord> arrivals{worker("a", 10, 5)};
  const auto report = simulate_pull(workload(100, 20), arrivals, PullConfig{15.0});
  ASSERT_TRUE(report.workers[0].ready_time.has_value());
  EXPECT_DOUBLE_EQ(*report.workers[0].ready_time, 20.0);
  EXPECT_DOUBLE_EQ(report.time_to_results, 120.0);
}

TEST(AddWorker, AnnouncementsBetweenPollsShareAWave) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0), worker("b", 11, 3), worker("c", 12, 3),
                                           worker("d", 14, 3)};
  const auto report = simulate_pull(workload(1000, 20), arrivals, PullConfig{15.0});
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(*report.workers[i].ready_time, 18.0) << report.workers[i].id;
    EXPECT_DOUBLE_EQ(report.workers[i].init_seconds, 3.0);
  }
}

TEST(AddWorker, LateJoinerContributesNothing) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0), worker("late", 25, 2)};
  PullConfig config{10.0};
  const auto report = simulate_pull(workload(40, 20), arrivals, config);
  EXPECT_DOUBLE_EQ(report.time_to_results, 40.0);
  EXPECT_EQ(report.workers[1].busy_seconds, 0.0);
  EXPECT_EQ(report.workers[1].packets, 0u);
  EXPECT_TRUE(report.workers[1].ready_time.has_value());
}

TEST(SimulatePull, SerialExecution) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0)};
  EXPECT_DOUBLE_EQ(simulate_pull(workload(100, 20), arrivals).time_to_results, 100.0);
}

TEST(SimulatePull, EvenSplitWithinGranularity) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0), worker("b", 0)};
  const auto report = simulate_pull(workload(100, 1), arrivals);
  EXPECT_NEAR(report.time_to_results, 50.0, 1.0);
  EXPECT_DOUBLE_EQ(report.serialized_work, 100.0);
}

TEST(SimulatePull, NeedsWorkers) {
  EXPECT_THROW(simulate_pull(workload(100, 1), {}), InputError);
  EXPECT_THROW(simulate_pull(workload(0, 1), std::vector<WorkerRecord>{worker("a", 0)}),
               InputError);
  EXPECT_THROW(simulate_pull(workload(10, 1),
                             std::vector<WorkerRecord>{worker("a", 0), worker("a", 1)}),
               InputError);
}

TEST(SimulatePull, MatchesModelForCernRampUp) {
  const double total = 240.0 * 3600.0;
  const auto arrivals = rampup_arrivals(model::kCern2013, 95);
  ASSERT_EQ(arrivals.size(), 95u);
  const auto report = simulate_pull(workload(total, 10), arrivals);
  const double expected = model::pull_time_to_results(model::kCern2013, total);
  EXPECT_NEAR(report.time_to_results, expected, 0.02 * expected);
}

TEST(SimulatePush, EqualStarts) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0), worker("b", 0)};
  EXPECT_DOUBLE_EQ(simulate_push(workload(100, 20), arrivals, 2).time_to_results, 50.0);
}

TEST(SimulatePush, StragglerDominates) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0), worker("b", 10)};
  EXPECT_DOUBLE_EQ(simulate_push(workload(100, 20), arrivals, 2).time_to_results, 60.0);
}

TEST(SimulatePush, Errors) {
  const std::vector<WorkerRecord> arrivals{worker("a", 0)};
  EXPECT_THROW(simulate_push(workload(100, 20), arrivals, 2), InputError);
  EXPECT_THROW(simulate_push(workload(100, 20), arrivals, 0), InputError);
}

TEST(SimulatePush, MatchesModelForCernRampUp) {
  const double total = 240.0 * 3600.0;
  const std::size_t jobs = push_job_count(model::kCern2013, total);
  const auto arrivals = rampup_arrivals(model::kCern2013, jobs);
  const auto report = simulate_push(workload(total, 10), arrivals, jobs);
  const double expected = model::push_time_to_results(model::kCern2013, total);
  EXPECT_NEAR(report.time_to_results, expected, 0.02 * expected);
}

TEST(RampupArrivals, StopsBelowCeiling) {
  const auto arrivals = rampup_arrivals(model::kCern2013, 1000);
  EXPECT_EQ(arrivals.size(), 99u);
  EXPECT_EQ(arrivals.front().id, "w0001");
  EXPECT_DOUBLE_EQ(arrivals.front().arrival_time, model::rampup_time(model::kCern2013, 1));
}

// Random arrival schedules with uniform speed.
std::vector<WorkerRecord> random_arrivals(sim::RngStream& rng, std::size_t n) {
  std::vector<WorkerRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(worker("w" + std::to_string(i), std::floor(rng.uniform(0, 500))));
  }
  return out;
}

TEST(PullProperties, WorkConservation) {
  sim::RngStream rng(21, sim::Stream::kScenarioGen);
  for (int trial = 0; trial < 50; ++trial) {
    Workload wl = workload(rng.uniform(10, 1e5), rng.uniform(0.5, 50));
    if (trial % 2) wl.locality = {{"n0", rng.uniform(0, 0.5)}, {"n1", rng.uniform(0, 0.5)}};
    auto arrivals = random_arrivals(rng, static_cast<std::size_t>(rng.uniform_int(1, 20)));
    for (auto& w : arrivals) {
      w.speed = rng.uniform(0.5, 2.0);
      w.init_duration = rng.uniform(0, 30);
      if (rng.uniform() < 0.5) w.local_node = rng.uniform() < 0.5 ? "n0" : "n1";
    }
    const auto report = simulate_pull(wl, arrivals, PullConfig{rng.uniform(0, 20)});
    EXPECT_NEAR(report.serialized_work, wl.total_work, 1e-12 * wl.total_work);
    double busy_work = 0.0, processed = 0.0;
    for (const auto& w : report.workers) {
      const auto it = std::find_if(arrivals.begin(), arrivals.end(),
                                   [&](const auto& a) { return a.id == w.id; });
      busy_work += w.busy_seconds * it->speed;
      processed += w.work;
    }
    EXPECT_NEAR(busy_work, wl.total_work, 1e-9 * wl.total_work);
    EXPECT_NEAR(processed, wl.total_work, 1e-12 * wl.total_work);
  }
}

TEST(PullProperties, PullNeverLosesToPush) {
  sim::RngStream rng(22, sim::Stream::kScenarioGen);
  for (int trial = 0; trial < 100; ++trial) {
    const Workload wl = workload(rng.uniform(100, 1e5), rng.uniform(0.5, 30));
    const auto arrivals = random_arrivals(rng, static_cast<std::size_t>(rng.uniform_int(1, 30)));
    const auto jobs = static_cast<std::size_t>(rng.uniform_int(1, arrivals.size()));
    const double pull = simulate_pull(wl, arrivals, PullConfig{0.0}).time_to_results;
    const double push = simulate_push(wl, arrivals, jobs).time_to_results;
    EXPECT_LE(pull, push + wl.packet_target + 1e-9) << trial;
  }
}

TEST(PullProperties, ExtraWorkerNeverHurts) {
  sim::RngStream rng(23, sim::Stream::kScenarioGen);
  for (int trial = 0; trial < 100; ++trial) {
    const Workload wl = workload(rng.uniform(100, 1e4), rng.uniform(0.5, 30));
    auto arrivals = random_arrivals(rng, static_cast<std::size_t>(rng.uniform_int(1, 10)));
    const PullConfig config{trial % 2 ? 10.0 : 0.0};
    const double base = simulate_pull(wl, arrivals, config).time_to_results;
    arrivals.push_back(worker("extra", rng.uniform(0, base)));
    const double more = simulate_pull(wl, arrivals, config).time_to_results;
    EXPECT_LE(more, base + 1e-9) << trial;
  }
}

TEST(PullProperties, LateStartersAreNotLeftIdle) {
  sim::RngStream rng(24, sim::Stream::kScenarioGen);
  for (int trial = 0; trial < 50; ++trial) {
    const Workload wl = workload(rng.uniform(1000, 1e5), rng.uniform(0.1, 5));
    auto arrivals = random_arrivals(rng, static_cast<std::size_t>(rng.uniform_int(2, 20)));
    for (auto& w : arrivals) w.speed = rng.uniform(0.5, 2.0);
    const auto report = simulate_pull(wl, arrivals, PullConfig{rng.uniform(0, 20)});
    for (const auto& w : report.workers) {
      EXPECT_LE(w.idle_seconds, wl.packet_target + 1e-9) << w.id;
    }
  }
}

}  // namespace
}  // namespace vaf::sched
