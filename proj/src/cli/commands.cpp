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

#include "vaf/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vaf/cli/csv.hpp"
#include "vaf/cli/units.hpp"
#include "vaf/errors.hpp"
#include "vaf/presets.hpp"

namespace vaf::cli {

namespace {

std::string num(double v) { return format_number(v); }

std::string num(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string num(std::size_t v) { return std::to_string(v); }

std::string params_key(const model::RampUpParams& p) {
  return "p0=" + num(p.p0) + " p1=" + num(p.p1);
}

// "1.5 s" style, for summaries.
std::string seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g s", v);
  return buf;
}

double relative_error(double value, double reference) {
  return (value - reference) / reference;
}

}  // namespace

model::RampUpParams resolve_params(const std::optional<std::string>& preset,
                                   std::optional<double> p0, std::optional<double> p1) {
  if (preset && (p0 || p1)) {
    throw InputError("give either --preset or --p0/--p1, not both");
  }
  if (preset) {
    if (auto params = model::rampup_preset(*preset)) {
      return *params;
    }
    throw InputError("unknown ramp-up preset '" + *preset + "' (known: cern-2013)");
  }
  if (!p0 || !p1) {
    throw InputError("need --preset or both --p0 and --p1");
  }
  model::RampUpParams params{*p0, *p1};
  params.validate();
  return params;
}

CommandResult cmd_model(const ModelRequest& r) {
  r.params.validate();
  const double scale = unit_seconds(r.unit);
  if (r.samples < 1) {
    throw InputError("sample count must be >= 1");
  }
  if (!(r.work_from > 0.0) || !std::isfinite(r.work_to) || r.work_to < r.work_from ||
      (r.samples > 1 && r.work_to == r.work_from)) {
    throw InputError("work range must be positive and ascending");
  }
  CsvTable table({"T_" + r.unit, "t_pull_" + r.unit, "t_push_" + r.unit, "ratio", "n_optimal"});
  for (std::size_t i = 0; i < r.samples; ++i) {
    double work = r.work_from;
    if (r.samples > 1) {
      const double f = static_cast<double>(i) / static_cast<double>(r.samples - 1);
      work = r.linear ? r.work_from + f * (r.work_to - r.work_from)
                      : r.work_from * std::pow(r.work_to / r.work_from, f);
    }
    if (i + 1 == r.samples) work = r.work_to;
    const double pull = model::pull_time_to_results(r.params, work);
    const double push = model::push_time_to_results(r.params, work);
    table.add_row({num(work / scale), num(pull / scale), num(push / scale), num(pull / push),
                   num(model::optimal_job_count(r.params, work))});
  }
  const std::string key = "model " + r.label + " " + params_key(r.params) + " from=" +
                          num(r.work_from) + " to=" + num(r.work_to) + " samples=" +
                          num(r.samples) + (r.linear ? " linear" : " log") + " unit=" + r.unit;
  const RunMetadata meta{fnv1a_hex(key), r.seed};
  CommandResult result;
  result.files.push_back({"model.csv", table.render(meta)});
  return result;
}

CommandResult cmd_compare(const CompareRequest& r) {
  r.params.validate();
  const double scale = unit_seconds(r.unit);
  if (r.work.empty()) {
    throw InputError("compare needs at least one amount of work");
  }
  CsvTable table({"T_" + r.unit, "t_pull_" + r.unit, "t_push_" + r.unit, "speedup_pct"});
  std::string key = "compare " + r.label + " " + params_key(r.params) + " unit=" + r.unit;
  std::ostringstream summary;
  for (double work : r.work) {
    if (!(work > 0.0) || !std::isfinite(work)) {
      throw InputError("work must be finite and > 0");
    }
    const double pull = model::pull_time_to_results(r.params, work);
    const double push = model::push_time_to_results(r.params, work);
    const double speedup = (1.0 - pull / push) * 100.0;
    table.add_row({num(work / scale), num(pull / scale), num(push / scale), num(speedup)});
    key += " " + num(work);
    char line[160];
    std::snprintf(line, sizeof line, "T=%g %s: pull %.4g %s, push %.4g %s, pull %.1f%% faster\n",
                  work / scale, r.unit.c_str(), pull / scale, r.unit.c_str(), push / scale,
                  r.unit.c_str(), speedup);
    summary << line;
  }
  CommandResult result;
  result.files.push_back({"compare.csv", table.render({fnv1a_hex(key), r.seed})});
  result.summary = summary.str();
  return result;
}

CommandResult cmd_fit(const std::vector<model::RampUpSample>& samples, const std::string& source,
                      std::uint64_t seed) {
  const model::FitResult fit = model::fit_rampup(samples);
  CsvTable table({"p0_per_s", "p1_per_s", "p0_per_h", "p1_per_h", "max_jobs", "residual_norm",
                  "iterations", "samples"});
  table.add_row({num(fit.params.p0), num(fit.params.p1), num(fit.params.p0 * 3600.0),
                 num(fit.params.p1 * 3600.0), num(fit.params.max_jobs()), num(fit.residual_norm),
                 std::to_string(fit.iterations), num(samples.size())});
  CommandResult result;
  result.files.push_back({"fit.csv", table.render({fnv1a_hex("fit " + source), seed})});
  return result;
}

CommandResult cmd_calibrate(const CalibrateRequest& r) {
  model::CalibrationOptions options;
  options.preferred_max_jobs = r.preferred_max_jobs;
  model::CalibrationResult cal;
  try {
    cal = model::calibrate_from_claims(r.work, r.t_pull, r.t_push, options);
  } catch (const NumericError& e) {
    // Claims outside what any ramp-up curve can produce are bad input.
    throw InputError(e.what());
  }
  CsvTable table({"name", "p0_per_h", "p1_per_h", "p0_per_s", "p1_per_s", "max_jobs",
                  "reduced_work", "pull_residual", "push_residual", "branches"});
  table.add_row({"calibrated", num(cal.params.p0 * 3600.0), num(cal.params.p1 * 3600.0),
                 num(cal.params.p0), num(cal.params.p1), num(cal.params.max_jobs()),
                 num(cal.reduced_work), num(cal.pull_residual), num(cal.push_residual),
                 std::to_string(cal.branches)});
  const std::string key = "calibrate T=" + num(r.work) + " pull=" + num(r.t_pull) +
                          " push=" + num(r.t_push) + " prefer=" + num(r.preferred_max_jobs);
  CommandResult result;
  result.files.push_back({"calibrate.csv", table.render({fnv1a_hex(key), r.seed})});
  char line[160];
  std::snprintf(line, sizeof line, "p0 = %.6g/h, p1 = %.6g/h (max_jobs %.4g, %d branch%s)\n",
                cal.params.p0 * 3600.0, cal.params.p1 * 3600.0, cal.params.max_jobs(),
                cal.branches, cal.branches == 1 ? "" : "es");
  result.summary = line;
  return result;
}

namespace {

void add_trace(CsvTable& table, const std::string& scheduler,
               const std::vector<sim::TraceRecord>& trace) {
  for (const auto& t : trace) {
    table.add_row({scheduler, num(t.time), std::to_string(t.seq), std::string(sim::to_string(t.kind)),
                   t.detail});
  }
}

CommandResult simulate_task_farm(const Scenario& s, const RunMetadata& meta) {
  std::vector<sched::WorkerRecord> arrivals = s.workers;
  if (s.source == ArrivalSource::kRampUp) {
    arrivals = sched::rampup_arrivals(*s.params, s.max_workers, s.init_duration, s.speed);
    if (arrivals.empty()) {
      throw InputError("arrivals: ramp-up produced no workers");
    }
  }

  CsvTable completion({"scheduler", "workers", "jobs", "packets", "time_to_results_s",
                       "model_s", "relative_error"});
  CsvTable workers({"scheduler", "id", "arrival_time", "ready_time", "init_seconds",
                    "busy_seconds", "idle_seconds", "work", "packets"});
  CsvTable trace({"scheduler", "time", "seq", "kind", "detail"});
  std::ostringstream summary;

  auto record = [&](const std::string& name, const sched::CompletionReport& report,
                    std::size_t jobs, std::optional<double> model_time) {
    std::optional<double> error;
    if (model_time) error = relative_error(report.time_to_results, *model_time);
    completion.add_row({name, num(report.workers.size()), jobs ? num(jobs) : std::string(),
                        num(report.packets_granted), num(report.time_to_results), num(model_time),
                        num(error)});
    for (const auto& w : report.workers) {
      workers.add_row({name, w.id, num(w.arrival_time), num(w.ready_time), num(w.init_seconds),
                       num(w.busy_seconds), num(w.idle_seconds), num(w.work), num(w.packets)});
    }
    add_trace(trace, name, report.trace);
    summary << name << ": time_to_results " << seconds(report.time_to_results);
    if (model_time) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (model %s, %+.3f%%)", seconds(*model_time).c_str(),
                    *error * 100.0);
      summary << buf;
    }
    summary << '\n';
  };

  if (s.scheduler != SchedulerChoice::kPush) {
    const auto report = sched::simulate_pull(s.workload, arrivals, s.pull);
    std::optional<double> model_time;
    if (s.params) model_time = model::pull_time_to_results(*s.params, s.workload.total_work);
    record("pull", report, 0, model_time);
  }
  if (s.scheduler != SchedulerChoice::kPull) {
    std::size_t jobs = arrivals.size();
    if (s.push_jobs) {
      jobs = *s.push_jobs;
    } else if (s.params) {
      jobs = sched::push_job_count(*s.params, s.workload.total_work);
    }
    if (jobs > arrivals.size()) {
      throw InputError("arrivals.push_jobs: " + std::to_string(jobs) + " jobs but only " +
                       std::to_string(arrivals.size()) + " workers arrive");
    }
    const auto report = sched::simulate_push(s.workload, arrivals, jobs, s.trace);
    std::optional<double> model_time;
    if (s.params) {
      model_time = model::push_time_at(*s.params, s.workload.total_work, static_cast<double>(jobs));
    }
    record("push", report, jobs, model_time);
  }

  CommandResult result;
  result.files.push_back({s.name + ".completion.csv", completion.render(meta)});
  result.files.push_back({s.name + ".workers.csv", workers.render(meta)});
  if (s.trace) result.files.push_back({s.name + ".trace.csv", trace.render(meta)});
  result.summary = summary.str();
  return result;
}

CommandResult simulate_elastic(const Scenario& s, std::uint64_t seed, const RunMetadata& meta) {
  autoscale::ElasticScenario scenario = s.elastic;
  scenario.seed = seed;
  const autoscale::ElasticReport r = autoscale::run_elastic_scenario(scenario);

  CsvTable summary({"drained", "drain_time", "end_time", "vms_requested", "vms_granted",
                    "request_failures", "peak_fleet", "completed_work", "lost_work"});
  summary.add_row({r.drained ? "true" : "false", num(r.drain_time), num(r.end_time),
                   num(r.vms_requested), num(r.vms_granted), num(r.request_failures),
                   num(r.peak_fleet), num(r.completed_work), num(r.lost_work)});

  CsvTable timeline({"time", "running", "pending", "waiting_jobs", "action", "detail"});
  for (const auto& row : r.timeline) {
    timeline.add_row({num(row.time), num(row.running), num(row.pending), num(row.waiting_jobs),
                      row.action, row.detail});
  }
  CsvTable ticks({"time", "running", "in_flight", "waiting", "waiting_long", "requested",
                  "granted", "shutdowns", "running_after", "in_flight_after"});
  for (const auto& t : r.ticks) {
    ticks.add_row({num(t.time), num(t.running), num(t.in_flight), num(t.waiting),
                   num(t.waiting_long), num(t.requested), num(t.granted), num(t.shutdowns),
                   num(t.running_after), num(t.in_flight_after)});
  }
  CsvTable jobs({"id", "submit_time", "duration", "first_start", "start_time", "finish_time",
                 "node", "restarts"});
  for (const auto& j : r.jobs) {
    jobs.add_row({std::to_string(j.id), num(j.submit_time), num(j.duration), num(j.first_start),
                  num(j.start_time), num(j.finish_time), j.node.value_or(""), num(j.restarts)});
  }
  CsvTable instances({"id", "request_time", "boot_latency", "boot_complete_time",
                      "join_time", "join_delay", "terminate_time", "state"});
  for (const auto& vm : r.instances) {
    std::optional<double> delay;
    if (vm.registration_time) delay = *vm.registration_time - vm.request_time;
    instances.add_row({vm.id, num(vm.request_time), num(vm.boot_latency),
                       num(vm.boot_complete_time), num(vm.registration_time), num(delay),
                       num(vm.terminate_time), cloud::to_string(vm.state)});
  }

  CommandResult result;
  result.files.push_back({s.name + ".summary.csv", summary.render(meta)});
  result.files.push_back({s.name + ".timeline.csv", timeline.render(meta)});
  result.files.push_back({s.name + ".ticks.csv", ticks.render(meta)});
  result.files.push_back({s.name + ".jobs.csv", jobs.render(meta)});
  result.files.push_back({s.name + ".instances.csv", instances.render(meta)});
  if (s.trace) {
    CsvTable trace({"scheduler", "time", "seq", "kind", "detail"});
    add_trace(trace, "elastic", r.trace);
    result.files.push_back({s.name + ".trace.csv", trace.render(meta)});
  }

  std::ostringstream line;
  if (r.drained) {
    line << "drained at " << seconds(r.drain_time);
  } else {
    line << "NOT drained by " << seconds(r.end_time);
  }
  line << "; " << r.vms_granted << " VMs granted of " << r.vms_requested << " requested, "
       << r.request_failures << " failed requests, peak fleet " << r.peak_fleet << '\n';
  result.summary = line.str();
  return result;
}

}  // namespace

CommandResult cmd_simulate(const Scenario& scenario, std::optional<std::uint64_t> seed) {
  const std::uint64_t effective = seed.value_or(scenario.seed);
  const RunMetadata meta{scenario.hash, effective};
  if (scenario.source == ArrivalSource::kElastic) {
    return simulate_elastic(scenario, effective, meta);
  }
  return simulate_task_farm(scenario, meta);
}

std::vector<std::string> stochastic_columns(const std::string& file_name) {
  auto ends_with = [&](const std::string& suffix) {
    return file_name.size() >= suffix.size() &&
           file_name.compare(file_name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".instances.csv")) {
    return {"boot_latency", "boot_complete_time", "join_time", "join_delay", "terminate_time",
            "state"};
  }
  if (ends_with(".jobs.csv")) {
    return {"first_start", "start_time", "finish_time", "node", "restarts"};
  }
  if (ends_with(".summary.csv")) {
    return {"drained", "drain_time", "end_time", "vms_requested", "vms_granted",
            "request_failures", "peak_fleet", "lost_work"};
  }
  if (ends_with(".timeline.csv")) {
    return {"time", "running", "pending", "waiting_jobs", "action", "detail"};
  }
  if (ends_with(".ticks.csv")) {
    return {"time", "running", "in_flight", "waiting", "waiting_long", "requested", "granted",
            "shutdowns", "running_after", "in_flight_after"};
  }
  if (ends_with(".trace.csv")) {
    return {"scheduler", "time", "seq", "kind", "detail"};
  }
  return {};  // task-farm runs draw no random numbers
}

}  // namespace vaf::cli
