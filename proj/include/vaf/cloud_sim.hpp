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
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vaf/rng.hpp"
#include "vaf/sim_engine.hpp"

// EC2-like cloud: instances are requested, boot after a random latency,
// register their job slots with the batch system on their own, and are torn
// down on request. Quota exhaustion and injected API failures surface as
// CloudRequestError subclasses that callers are expected to tolerate.

namespace vaf::cloud {

enum class VmState { kPending, kBooting, kRunning, kTerminating, kTerminated };

const char* to_string(VmState state);

struct VmInstance {
  std::string id;
  VmState state = VmState::kPending;
  double request_time = 0.0;
  double boot_latency = 0.0;
  std::optional<double> boot_complete_time;
  std::optional<double> registration_time;
  std::optional<double> terminate_time;
  int slots = 1;
};

struct BootLatency {
  double mean = 375.0;   // seconds
  double stddev = 39.0;  // seconds
};

/// "cern-2013" (375 s +- 39 s) or "torino-2013" (351 s +- 21 s).
std::optional<BootLatency> boot_latency_preset(std::string_view name);

struct FailurePlan {
  std::size_t fail_first = 0;     // the first k request calls fail
  double fail_probability = 0.0;  // every request call fails with probability q
};

struct CloudConfig {
  std::size_t capacity = 1000;  // concurrently existing instances
  BootLatency boot_latency;
  FailurePlan failure_plan;
  int slots = 4;                   // job slots per instance
  double registration_delay = 10;  // boot complete -> node visible to the batch system
  double teardown_delay = 30;      // terminate request -> terminated

  void validate() const;
};

class CloudRequestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuotaExceeded : public CloudRequestError {
 public:
  using CloudRequestError::CloudRequestError;
};

class InjectedFailure : public CloudRequestError {
 public:
  using CloudRequestError::CloudRequestError;
};

struct NodeRegistration {
  std::string node_id;
  int slots = 0;
  double time = 0.0;
};

class Cloud {
 public:
  Cloud(CloudConfig config, sim::Simulation& simulation, std::uint64_t seed);

  Cloud(const Cloud&) = delete;
  Cloud& operator=(const Cloud&) = delete;

  /// Grants min(count, capacity - existing) instances, or throws
  /// QuotaExceeded / InjectedFailure and grants nothing.
  std::vector<std::string> request_instances(std::size_t count);

  /// booting -> running. Invoked by the boot-complete event.
  void on_boot_complete(const std::string& instance_id);

  /// running -> terminating; the node deregisters at once and the instance is
  /// terminated after the teardown delay. Throws InputError for unknown or
  /// non-running instances.
  void terminate_instance(const std::string& instance_id);

  void on_register(std::function<void(const NodeRegistration&)> listener) {
    register_listener_ = std::move(listener);
  }
  void on_deregister(std::function<void(const std::string&)> listener) {
    deregister_listener_ = std::move(listener);
  }

  /// Non-terminated instances.
  std::size_t existing() const;
  /// Running instances whose node has registered.
  std::size_t registered() const;
  /// Pending, booting, or running but not yet registered.
  std::size_t in_flight() const;

  const VmInstance& instance(const std::string& instance_id) const;
  std::vector<VmInstance> instances() const;

  std::size_t request_calls() const { return request_calls_; }
  std::size_t granted_total() const { return granted_total_; }
  std::size_t peak_existing() const { return peak_existing_; }
  const CloudConfig& config() const { return config_; }

 private:
  VmInstance& find(const std::string& instance_id);
  double draw_latency(std::uint64_t ordinal) const;

  CloudConfig config_;
  sim::Simulation& simulation_;
  std::uint64_t seed_;
  sim::RngStream failure_rng_;
  std::map<std::string, VmInstance> instances_;
  std::function<void(const NodeRegistration&)> register_listener_;
  std::function<void(const std::string&)> deregister_listener_;
  std::size_t request_calls_ = 0;
  std::size_t granted_total_ = 0;
  std::size_t peak_existing_ = 0;
};

}  // namespace vaf::cloud
