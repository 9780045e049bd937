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

// Acceptance harness: `acceptance N` runs criterion N, `acceptance` runs
// all of them. Each criterion prints one PASS/FAIL line with its runtime
// against the budget; the exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support/elastic_properties.hpp"
#include "vaf/analytic_model.hpp"
#include "vaf/cli/commands.hpp"
#include "vaf/cli/scenario.hpp"
#include "vaf/cloud_sim.hpp"
#include "vaf/presets.hpp"
#include "vaf/rng.hpp"
#include "vaf/schedulers.hpp"

namespace {

using vaf::model::RampUpParams;

constexpr double kHour = 3600.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::vector<std::vector<std::string>> csv_body(const std::string& csv,
                                               std::vector<std::string>* header = nullptr) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : text) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    return cells;
  };
  if (header) *header = split(line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(split(line));
  return rows;
}

// 1. Calibration from the ten-day claims and the two-day cross-check.
void calibration(Outcome& o) {
  const auto cal = vaf::model::calibrate_from_claims(240 * kHour, 2.7 * kHour, 3.3 * kHour);
  o.check(cal.pull_residual <= 1e-6 && cal.push_residual <= 1e-6,
          fmt("residuals %.3g/%.3g", cal.pull_residual, cal.push_residual));
  const double ceiling = cal.params.max_jobs();
  o.check(std::abs(ceiling - 100.0) <= 5.0, fmt("p0/p1 = %.4g", ceiling));

  vaf::cli::CompareRequest request;
  request.params = cal.params;
  request.label = "calibrated";
  request.work = {48 * kHour};
  request.unit = "min";
  const auto rows = csv_body(vaf::cli::cmd_compare(request).files.at(0).content);
  const double pull = std::stod(rows.at(0).at(1));
  const double push = std::stod(rows.at(0).at(2));
  const double speedup = std::stod(rows.at(0).at(3));
  o.check(std::abs(pull - 40.0) <= 2.0, fmt("t_pull(48h) = %.3f min", pull));
  o.check(std::abs(push - 53.0) <= 2.0, fmt("t_push(48h) = %.3f min", push));
  o.check(std::abs(speedup - 25.0) <= 2.0, fmt("speedup(48h) = %.2f%%", speedup));
  o.detail << (o.pass ? "" : "; ")
           << fmt("p0=%.6g/h p1=%.6g/h; ", cal.params.p0 * kHour, cal.params.p1 * kHour)
           << fmt("48h: pull %.2f min, push %.2f min, %.2f%%", pull, push, speedup);
}

// 2. Limits of the pull/push ratio and its shape on a wide log grid.
void ratio_limits(Outcome& o) {
  const RampUpParams p = vaf::model::kCern2013;
  const double reference = 240 * kHour;
  const double low = vaf::model::speedup_ratio(p, 1e-6 * reference);
  const double high = vaf::model::speedup_ratio(p, 1e6 * reference);
  o.check(std::abs(low - 1.0 / std::sqrt(2.0)) <= 1e-3, fmt("ratio(1e-6 ref) = %.6f", low));
  o.check(high > 0.99, fmt("ratio(1e6 ref) = %.6f", high));

  constexpr int kPoints = 200;
  std::size_t decreases = 0;
  double worst_drop = 0.0;
  double first_t = 0.0;
  double previous = 0.0;
  double min_ratio = 1.0;
  double min_t = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double work = reference * std::pow(10.0, -6.0 + 12.0 * i / (kPoints - 1));
    const double r = vaf::model::speedup_ratio(p, work);
    if (i > 0 && r < previous) {
      if (decreases == 0) first_t = work;
      ++decreases;
      worst_drop = std::max(worst_drop, previous - r);
    }
    if (r < min_ratio) {
      min_ratio = r;
      min_t = work;
    }
    previous = r;
  }
  if (decreases > 0) {
    o.check(false, fmt("ratio decreases on %.0f of 199 grid steps, first at T=%.4g h, "
                       "largest drop %.3g",
                       static_cast<double>(decreases), first_t / kHour, worst_drop) +
                       fmt("; grid minimum %.7f at T=%.4g h", min_ratio, min_t / kHour));
  }
  o.detail << (o.pass ? "" : "; ") << fmt("ratio %.6f -> %.6f", low, high);
}

// 3. Identities between the closed forms over random parameters.
void self_consistency(Outcome& o) {
  vaf::sim::RngStream rng(2013, vaf::sim::Stream::kScenarioGen);
  double worst_rampup = 0.0;
  double worst_pull = 0.0;
  double worst_push = 0.0;
  double worst_derivative = 0.0;
  constexpr int kDraws = 1000;
  for (int i = 0; i < kDraws; ++i) {
    const double p0 = std::pow(10.0, rng.uniform(-3.0, 1.0));
    const double p1 = (i % 10 == 0) ? 0.0 : p0 / std::pow(10.0, rng.uniform(0.5, 4.0));
    const RampUpParams p{p0, p1};
    const double scale = p1 > 0.0 ? 1.0 / p1 : 100.0 / p0;
    const double t = scale * std::pow(10.0, rng.uniform(-4.0, 2.0));

    const double n = vaf::model::running_jobs(p, t);
    worst_rampup = std::max(worst_rampup, rel(vaf::model::rampup_time(p, n), t));

    const double work = vaf::model::pull_serialized_time(p, t);
    worst_pull = std::max(worst_pull, rel(vaf::model::pull_time_to_results(p, work), t));

    const double n_opt = vaf::model::optimal_job_count(p, work);
    worst_push = std::max(worst_push, rel(vaf::model::push_time_to_results(p, work),
                                          vaf::model::push_time_at(p, work, n_opt)));

    const double h = 1e-4 * t;
    const double slope = (vaf::model::pull_serialized_time(p, t + h) -
                          vaf::model::pull_serialized_time(p, t - h)) /
                         (2.0 * h);
    worst_derivative = std::max(worst_derivative, rel(slope, n));
  }
  o.check(worst_rampup <= 1e-9, fmt("n(t)/t(n) round trip %.3g", worst_rampup));
  o.check(worst_pull <= 1e-9, fmt("T(t)/t(T) round trip %.3g", worst_pull));
  o.check(worst_push <= 1e-9, fmt("push composition %.3g", worst_push));
  o.check(worst_derivative <= 1e-6, fmt("dT/dt vs n(t) %.3g", worst_derivative));
  o.detail << (o.pass ? "" : "; ")
           << fmt("worst relative errors %.2g, %.2g, %.2g", worst_rampup, worst_pull, worst_push)
           << fmt(", derivative %.2g over 1000 draws", worst_derivative);
}

// 4. Discrete-event schedulers against the closed forms.
void sim_vs_model(Outcome& o) {
  const RampUpParams p = vaf::model::kCern2013;
  for (double hours : {12.0, 48.0, 240.0}) {
    vaf::sched::Workload workload;
    workload.total_work = hours * kHour;
    workload.packet_target = 10.0;

    const auto pull_arrivals = vaf::sched::rampup_arrivals(p, 1000);
    const double pull = vaf::sched::simulate_pull(workload, pull_arrivals).time_to_results;
    const double pull_model = vaf::model::pull_time_to_results(p, workload.total_work);

    const std::size_t jobs = vaf::sched::push_job_count(p, workload.total_work);
    const auto push_arrivals = vaf::sched::rampup_arrivals(p, jobs);
    const double push =
        vaf::sched::simulate_push(workload, push_arrivals, jobs).time_to_results;
    const double push_model = vaf::model::push_time_to_results(p, workload.total_work);

    const double e_pull = (pull - pull_model) / pull_model;
    const double e_push = (push - push_model) / push_model;
    o.check(std::abs(e_pull) <= 0.02, fmt("pull at %gh off by %+.2f%%", hours, e_pull * 100));
    o.check(std::abs(e_push) <= 0.02, fmt("push at %gh off by %+.2f%%", hours, e_push * 100));
    o.detail << (o.pass ? "" : "; ")
             << fmt("%gh pull %+.2f%% push %+.2f%%", hours, e_pull * 100, e_push * 100) << ' ';
  }
}

// 5. Least-squares recovery of random ramp-ups.
void fit_recovery(Outcome& o) {
  vaf::sim::RngStream rng(5, vaf::sim::Stream::kScenarioGen);
  double worst_clean = 0.0;
  double worst_noisy = 0.0;
  for (int set = 0; set < 20; ++set) {
    const double p0 = std::pow(10.0, rng.uniform(-1.0, 0.3));
    const double ceiling = std::pow(10.0, rng.uniform(std::log10(50.0), std::log10(500.0)));
    const RampUpParams truth{p0, p0 / ceiling};
    vaf::sim::RngStream noise(1000 + static_cast<std::uint64_t>(set), vaf::sim::Stream::kNoise);
    std::vector<vaf::model::RampUpSample> clean;
    std::vector<vaf::model::RampUpSample> noisy;
    const double span = 8.0 / truth.p1;
    for (int k = 1; k <= 120; ++k) {
      const double t = span * k / 120.0;
      const double n = vaf::model::running_jobs(truth, t);
      clean.push_back({t, n});
      noisy.push_back({t, std::max(0.0, n + noise.normal(0.0, 1.0))});
    }
    const auto a = vaf::model::fit_rampup(clean);
    const auto b = vaf::model::fit_rampup(noisy);
    worst_clean = std::max({worst_clean, rel(a.params.p0, truth.p0), rel(a.params.p1, truth.p1)});
    worst_noisy = std::max({worst_noisy, rel(b.params.p0, truth.p0), rel(b.params.p1, truth.p1)});
  }
  o.check(worst_clean <= 1e-6, fmt("noiseless worst %.3g", worst_clean));
  o.check(worst_noisy <= 0.05, fmt("noisy worst %.3g", worst_noisy));
  o.detail << (o.pass ? "" : "; ")
           << fmt("worst relative error %.2g noiseless, %.3f with noise", worst_clean,
                  worst_noisy);
}

// 6. Boot latency statistics and deterministic worker joins.
void boot_latency(Outcome& o) {
  vaf::sim::Simulation simulation;
  vaf::cloud::CloudConfig config;
  config.boot_latency = *vaf::cloud::boot_latency_preset("cern-2013");
  config.capacity = 1000;
  vaf::cloud::Cloud cloud(config, simulation, 2013);
  cloud.request_instances(1000);
  simulation.run();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& vm : cloud.instances()) {
    sum += vm.boot_latency;
    sum_sq += vm.boot_latency * vm.boot_latency;
  }
  const double count = static_cast<double>(cloud.instances().size());
  const double mean = sum / count;
  const double sd = std::sqrt((sum_sq - count * mean * mean) / (count - 1.0));
  o.check(count == 1000.0, fmt("%.0f boots", count));
  o.check(mean >= 365.0 && mean <= 385.0, fmt("mean %.2f s", mean));
  o.check(sd >= 30.0 && sd <= 48.0, fmt("stddev %.2f s", sd));

  const auto scenario = vaf::cli::parse_scenario(vaf::cli::with_overrides(
      *vaf::cli::builtin_scenario("boot-latency-10vm"), {"cloud.boot_latency_stddev=0"}));
  const double tick = scenario.elastic.cloud.registration_delay;
  const auto result = vaf::cli::cmd_simulate(scenario);
  std::size_t joined = 0;
  for (const auto& file : result.files) {
    if (file.name != "boot-latency-10vm.instances.csv") continue;
    for (const auto& row : csv_body(file.content)) {
      const double request = std::stod(row.at(1));
      const double join = std::stod(row.at(4));
      o.check(join == request + 375.0 + tick,
              fmt("worker joined at %.6g, requested at %.6g", join, request));
      ++joined;
    }
  }
  o.check(joined == 10, fmt("%.0f workers joined", static_cast<double>(joined)));
  o.detail << (o.pass ? "" : "; ") << fmt("1000 boots: mean %.2f s, stddev %.2f s; ", mean, sd)
           << fmt("10 joins at request + 375 s + %.0f s", tick);
}

// 7. Autoscaler invariants on random scripts, with and without failures.
void autoscaler_properties(Outcome& o) {
  std::size_t violations = 0;
  std::size_t mismatched = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto scenario = vaf::testing::random_elastic_scenario(seed);
    const auto clean = vaf::autoscale::run_elastic_scenario(scenario);
    auto failing = scenario;
    failing.cloud.failure_plan.fail_first = 3;
    const auto flaky = vaf::autoscale::run_elastic_scenario(failing);

    std::string problem = vaf::testing::check_elastic_invariants(scenario, clean);
    if (problem.empty()) problem = vaf::testing::check_elastic_invariants(failing, flaky);
    if (!problem.empty()) {
      ++violations;
      if (first.empty()) first = "seed " + std::to_string(seed) + ": " + problem;
    }
    if (flaky.vms_granted != clean.vms_granted) {
      ++mismatched;
      if (first.empty()) {
        first = "seed " + std::to_string(seed) + ": granted " +
                std::to_string(flaky.vms_granted) + " with failures vs " +
                std::to_string(clean.vms_granted);
      }
    }
  }
  o.check(violations == 0, std::to_string(violations) + " runs broke an invariant");
  o.check(mismatched == 0, std::to_string(mismatched) + " runs granted a different VM total "
                                                         "under fail-first-3");
  if (!first.empty()) o.detail << "; first: " << first;
  if (o.pass) o.detail << "100 scripts: quotas, requests, drain and failure totals hold";
}

// 8. Byte-stable output per seed; seeds only move stochastic columns.
void determinism(Outcome& o) {
  std::vector<std::string> texts;
  for (const auto& name : vaf::cli::builtin_scenario_names()) {
    texts.push_back(*vaf::cli::builtin_scenario(name));
  }
  texts.push_back(
      "name = mixed\n[arrivals]\nsource = elastic\nsubmit = 0s 12 20min\nsubmit = 90min 30 "
      "10min\nterminate = 25min vm0002\n[cloud]\nboot_latency = torino-2013\nfail_first = 1\n"
      "fail_probability = 0.2\n[elastiq]\nmax_quota = 6\n[output]\ntrace = true\n");

  std::size_t files = 0;
  for (const auto& text : texts) {
    const auto scenario = vaf::cli::parse_scenario(text);
    const auto a = vaf::cli::cmd_simulate(scenario, 17);
    const auto b = vaf::cli::cmd_simulate(scenario, 17);
    const auto c = vaf::cli::cmd_simulate(scenario, 18);
    o.check(a.files.size() == b.files.size() && a.files.size() == c.files.size(),
            scenario.name + ": file sets differ");
    for (std::size_t i = 0; i < a.files.size() && i < c.files.size(); ++i) {
      const auto& name = a.files[i].name;
      o.check(a.files[i].content == b.files[i].content, name + " differs between equal seeds");
      ++files;

      const auto stochastic = vaf::cli::stochastic_columns(name);
      std::vector<std::string> header;
      const auto rows_a = csv_body(a.files[i].content, &header);
      const auto rows_c = csv_body(c.files[i].content);
      std::vector<std::size_t> fixed;
      for (std::size_t col = 0; col < header.size(); ++col) {
        if (std::find(stochastic.begin(), stochastic.end(), header[col]) == stochastic.end()) {
          fixed.push_back(col);
        }
      }
      if (fixed.empty()) continue;  // event logs: every column is stochastic
      if (rows_a.size() != rows_c.size()) {
        o.check(false, name + ": row count changes with the seed");
        continue;
      }
      for (std::size_t r = 0; r < rows_a.size(); ++r) {
        for (std::size_t col : fixed) {
          if (rows_a[r][col] != rows_c[r][col]) {
            o.check(false, name + " row " + std::to_string(r + 1) + " column " + header[col] +
                               " changes with the seed");
          }
        }
      }
    }
  }
  o.detail << (o.pass ? "" : "; ") << files << " files byte-identical per seed";
}

struct Criterion {
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> table{
      {1, {"calibration and claim reproduction", 1.0, calibration}},
      {2, {"ratio limits and monotonicity", 1.0, ratio_limits}},
      {3, {"analytic self-consistency", 5.0, self_consistency}},
      {4, {"simulation vs model", 10.0, sim_vs_model}},
      {5, {"fit recovery", 5.0, fit_recovery}},
      {6, {"boot latency statistics", 2.0, boot_latency}},
      {7, {"autoscaler properties", 30.0, autoscaler_properties}},
      {8, {"determinism", 5.0, determinism}},
  };
  return table;
}

bool run_one(int id, const Criterion& c) {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(outcome);
  } catch (const std::exception& e) {
    outcome.check(false, std::string("threw: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outcome.check(elapsed <= c.budget_seconds, fmt("took %.2f s, budget %.0f s", elapsed,
                                                 c.budget_seconds));
  std::printf("criterion %d [%s]: %s (%.3f s of %.0f s) %s\n", id, c.title,
              outcome.pass ? "PASS" : "FAIL", elapsed, c.budget_seconds,
              outcome.detail.str().c_str());
  std::fflush(stdout);
  return outcome.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::fprintf(stderr, "usage: acceptance [criterion 1-8]\n");
    return 2;
  }
  if (argc == 2) {
    const int id = std::atoi(argv[1]);
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
      return 2;
    }
    return run_one(id, it->second) ? 0 : 1;
  }
  bool all = true;
  for (const auto& [id, c] : criteria()) all = run_one(id, c) && all;
  return all ? 0 : 1;
}
