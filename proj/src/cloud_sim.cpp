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

#include "vaf/cloud_sim.hpp"

#include <cmath>
#include <cstdio>

#include "vaf/errors.hpp"

namespace vaf::cloud {

using sim::EventKind;

const char* to_string(VmState state) {
  switch (state) {
    case VmState::kPending: return "pending";
    case VmState::kBooting: return "booting";
    case VmState::kRunning: return "running";
    case VmState::kTerminating: return "terminating";
    case VmState::kTerminated: return "terminated";
  }
  return "unknown";
}

std::optional<BootLatency> boot_latency_preset(std::string_view name) {
  if (name == "cern-2013") {
    return BootLatency{375.0, 39.0};  // 6 min 15 s +- 39 s
  }
  if (name == "torino-2013") {
    return BootLatency{351.0, 21.0};  // 5 min 51 s +- 21 s
  }
  return std::nullopt;
}

void CloudConfig::validate() const {
  if (!std::isfinite(boot_latency.mean) || boot_latency.mean <= 0.0) {
    throw InputError("cloud boot latency mean must be > 0");
  }
  if (!std::isfinite(boot_latency.stddev) || boot_latency.stddev < 0.0) {
    throw InputError("cloud boot latency stddev must be >= 0");
  }
  if (!(failure_plan.fail_probability >= 0.0 && failure_plan.fail_probability <= 1.0)) {
    throw InputError("cloud failure probability must be within [0, 1]");
  }
  if (slots < 1) {
    throw InputError("cloud slots per instance must be >= 1");
  }
  if (!std::isfinite(registration_delay) || registration_delay < 0.0) {
    throw InputError("cloud registration delay must be >= 0");
  }
  if (!std::isfinite(teardown_delay) || teardown_delay < 0.0) {
    throw InputError("cloud teardown delay must be >= 0");
  }
}

Cloud::Cloud(CloudConfig config, sim::Simulation& simulation, std::uint64_t seed)
    : config_(config),
      simulation_(simulation),
      seed_(seed),
      failure_rng_(seed, sim::Stream::kFailureInjection) {
  config_.validate();
}

VmInstance& Cloud::find(const std::string& instance_id) {
  auto it = instances_.find(instance_id);
  if (it == instances_.end()) {
    throw InputError("unknown instance '" + instance_id + "'");
  }
  return it->second;
}

const VmInstance& Cloud::instance(const std::string& instance_id) const {
  return const_cast<Cloud*>(this)->find(instance_id);
}

std::vector<VmInstance> Cloud::instances() const {
  std::vector<VmInstance> out;
  out.reserve(instances_.size());
  for (const auto& [id, vm] : instances_) {
    out.push_back(vm);
  }
  return out;
}

std::size_t Cloud::existing() const {
  std::size_t n = 0;
  for (const auto& [id, vm] : instances_) {
    n += vm.state != VmState::kTerminated;
  }
  return n;
}

std::size_t Cloud::registered() const {
  std::size_t n = 0;
  for (const auto& [id, vm] : instances_) {
    n += vm.state == VmState::kRunning && vm.registration_time.has_value();
  }
  return n;
}

std::size_t Cloud::in_flight() const {
  std::size_t n = 0;
  for (const auto& [id, vm] : instances_) {
    n += vm.state == VmState::kPending || vm.state == VmState::kBooting ||
         (vm.state == VmState::kRunning && !vm.registration_time);
  }
  return n;
}

// Each instance gets its own sub-stream keyed by its ordinal, so a draw never
// depends on how many resamples earlier instances needed.
double Cloud::draw_latency(std::uint64_t ordinal) const {
  sim::RngStream rng(sim::counter_hash(seed_, static_cast<std::uint64_t>(sim::Stream::kBootLatency),
                                       ordinal),
                     sim::Stream::kBootLatency);
  if (config_.boot_latency.stddev == 0.0) {
    return config_.boot_latency.mean;
  }
  return rng.truncated_normal(config_.boot_latency.mean, config_.boot_latency.stddev);
}

std::vector<std::string> Cloud::request_instances(std::size_t count) {
  if (count < 1) {
    throw InputError("instance request count must be >= 1");
  }
  const std::size_t call = request_calls_++;
  if (call < config_.failure_plan.fail_first) {
    throw InjectedFailure("injected failure on request " + std::to_string(call + 1));
  }
  if (config_.failure_plan.fail_probability > 0.0 &&
      failure_rng_.uniform() < config_.failure_plan.fail_probability) {
    throw InjectedFailure("injected random failure on request " + std::to_string(call + 1));
  }
  const std::size_t have = existing();
  const std::size_t available = have < config_.capacity ? config_.capacity - have : 0;
  if (available == 0) {
    throw QuotaExceeded("cloud capacity of " + std::to_string(config_.capacity) +
                        " instances exhausted");
  }

  const std::size_t grant = std::min(count, available);
  const double now = simulation_.now();
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < grant; ++i) {
    const std::uint64_t ordinal = instances_.size() + 1;
    char buf[24];
    std::snprintf(buf, sizeof buf, "vm%04llu", static_cast<unsigned long long>(ordinal));
    const std::string id = buf;

    VmInstance vm;
    vm.id = id;
    vm.request_time = now;
    vm.boot_latency = draw_latency(ordinal);
    vm.slots = config_.slots;
    instances_.emplace(id, vm);
    ids.push_back(id);

    // Image transfer is negligible: deployment starts the boot immediately.
    simulation_.schedule(now, EventKind::kVmDeployed, id, [this, id] {
      auto& v = find(id);
      if (v.state == VmState::kPending) {
        v.state = VmState::kBooting;
      }
    });
    simulation_.schedule(now + vm.boot_latency, EventKind::kVmBootComplete, id,
                         [this, id] { on_boot_complete(id); });
  }
  granted_total_ += grant;
  peak_existing_ = std::max(peak_existing_, existing());
  return ids;
}

void Cloud::on_boot_complete(const std::string& instance_id) {
  auto& vm = find(instance_id);
  if (vm.state != VmState::kBooting) {
    throw SimulationLogicError("instance '" + instance_id + "' finished booting while " +
                               to_string(vm.state));
  }
  vm.state = VmState::kRunning;
  vm.boot_complete_time = simulation_.now();
  simulation_.schedule_in(config_.registration_delay, EventKind::kNodeRegistered, instance_id,
                          [this, instance_id] {
                            auto& v = find(instance_id);
                            if (v.state != VmState::kRunning) {
                              return;  // shut down before it could register
                            }
                            v.registration_time = simulation_.now();
                            if (register_listener_) {
                              register_listener_(
                                  NodeRegistration{instance_id, v.slots, simulation_.now()});
                            }
                          });
}

void Cloud::terminate_instance(const std::string& instance_id) {
  auto& vm = find(instance_id);
  if (vm.state != VmState::kRunning) {
    throw InputError("instance '" + instance_id + "' is " + to_string(vm.state) +
                     ", only running instances can be terminated");
  }
  const bool was_registered = vm.registration_time.has_value();
  vm.state = VmState::kTerminating;
  if (was_registered && deregister_listener_) {
    deregister_listener_(instance_id);
  }
  simulation_.schedule_in(config_.teardown_delay, EventKind::kShutdownComplete, instance_id,
                          [this, instance_id] {
                            auto& v = find(instance_id);
                            v.state = VmState::kTerminated;
                            v.terminate_time = simulation_.now();
                          });
}

}  // namespace vaf::cloud
