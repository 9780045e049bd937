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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vaf/cli/commands.hpp"
#include "vaf/cli/csv.hpp"
#include "vaf/cli/scenario.hpp"
#include "vaf/cli/units.hpp"
#include "vaf/errors.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct ParamArgs {
  std::optional<std::string> preset;
  std::optional<std::string> p0;
  std::optional<std::string> p1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Ramp-up preset (cern-2013)");
    cmd->add_option("--p0", p0, "Initial job start rate, e.g. 1215.6/h");
    cmd->add_option("--p1", p1, "Saturation rate, e.g. 12.2/h");
  }

  vaf::model::RampUpParams resolve() const {
    std::optional<double> r0;
    std::optional<double> r1;
    if (p0) r0 = vaf::cli::parse_rate(*p0);
    if (p1) r1 = vaf::cli::parse_rate(*p1);
    return vaf::cli::resolve_params(preset, r0, r1);
  }

  std::string label() const { return preset.value_or("custom"); }
};

void emit(const vaf::cli::CommandResult& result, const std::optional<std::string>& out_dir,
          bool csv_to_stdout) {
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (const auto& file : result.files) {
      const auto path = std::filesystem::path(*out_dir) / file.name;
      std::ofstream out(path, std::ios::binary);
      out << file.content;
      if (!out) throw std::runtime_error("cannot write " + path.string());
    }
    std::cout << result.summary;
    for (const auto& file : result.files) {
      std::cout << "wrote " << (std::filesystem::path(*out_dir) / file.name).string() << '\n';
    }
    return;
  }
  if (csv_to_stdout) {
    for (const auto& file : result.files) std::cout << file.content;
    std::cerr << result.summary;
  } else {
    std::cout << result.summary;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vaf: pull/push time-to-results models, schedulers and elastic cloud simulation"};
  app.set_version_flag("--version", std::string(vaf::cli::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::optional<std::string> out_dir;
  app.add_option("--seed", seed, "Random seed (default 1)");
  app.add_option("--out", out_dir, "Write CSV files into this directory");

  ParamArgs model_params;
  std::string from = "1h";
  std::string to = "240h";
  long long samples = 100;
  bool linear = false;
  std::string unit = "h";
  auto* model = app.add_subcommand("model", "Pull and push time to results over a work range");
  model_params.attach(model);
  model->add_option("--from", from, "Smallest serialized work (default 1h)");
  model->add_option("--to", to, "Largest serialized work (default 240h)");
  model->add_option("--samples", samples, "Number of points (default 100)");
  model->add_flag("--linear", linear, "Linear instead of logarithmic spacing");
  model->add_option("--unit", unit, "Output time unit: s, min, h or d (default h)");

  ParamArgs compare_params;
  std::vector<std::string> works;
  std::string compare_unit = "h";
  auto* compare = app.add_subcommand("compare", "Speedup of pull over push for given work");
  compare_params.attach(compare);
  compare->add_option("--work,-T", works, "Serialized work, repeatable or comma separated")
      ->required()
      ->delimiter(',');
  compare->add_option("--unit", compare_unit, "Output time unit (default h)");

  std::string samples_path;
  auto* fit = app.add_subcommand("fit", "Fit a ramp-up curve to a t,n sample file");
  fit->add_option("samples", samples_path, "CSV with header t,n (seconds, jobs)")->required();

  std::string cal_work;
  std::string cal_pull;
  std::string cal_push;
  double prefer = 100.0;
  auto* calibrate = app.add_subcommand("calibrate", "Ramp-up parameters from claimed times");
  calibrate->add_option("--work", cal_work, "Serialized work, e.g. 240h")->required();
  calibrate->add_option("--pull", cal_pull, "Claimed pull time to results")->required();
  calibrate->add_option("--push", cal_push, "Claimed push time to results")->required();
  calibrate->add_option("--prefer-max-jobs", prefer,
                        "Pick the branch whose p0/p1 is closest to this (default 100)");

  std::string scenario_arg;
  std::vector<std::string> overrides;
  bool list = false;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file or built-in scenario");
  simulate->add_option("scenario", scenario_arg, "Scenario file or built-in name");
  simulate->add_option("--set", overrides, "Override a key, e.g. cloud.boot_latency_stddev=0");
  simulate->add_flag("--list", list, "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*model) {
      vaf::cli::ModelRequest r;
      r.params = model_params.resolve();
      r.label = model_params.label();
      r.work_from = vaf::cli::parse_duration(from);
      r.work_to = vaf::cli::parse_duration(to);
      if (samples < 1) throw vaf::InputError("--samples must be >= 1");
      r.samples = static_cast<std::size_t>(samples);
      r.linear = linear;
      r.unit = unit;
      r.seed = seed;
      emit(vaf::cli::cmd_model(r), out_dir, true);
    } else if (*compare) {
      vaf::cli::CompareRequest r;
      r.params = compare_params.resolve();
      r.label = compare_params.label();
      for (const auto& w : works) r.work.push_back(vaf::cli::parse_duration(w));
      r.unit = compare_unit;
      r.seed = seed;
      emit(vaf::cli::cmd_compare(r), out_dir, true);
    } else if (*fit) {
      std::ifstream in(samples_path, std::ios::binary);
      if (!in) throw vaf::InputError("cannot open '" + samples_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      std::istringstream body(text.str());
      const auto parsed = vaf::cli::read_samples(body, samples_path);
      emit(vaf::cli::cmd_fit(parsed, text.str(), seed), out_dir, true);
    } else if (*calibrate) {
      vaf::cli::CalibrateRequest r;
      r.work = vaf::cli::parse_duration(cal_work);
      r.t_pull = vaf::cli::parse_duration(cal_pull);
      r.t_push = vaf::cli::parse_duration(cal_push);
      r.preferred_max_jobs = prefer;
      r.seed = seed;
      emit(vaf::cli::cmd_calibrate(r), out_dir, true);
    } else if (*simulate) {
      if (list) {
        for (const auto& name : vaf::cli::builtin_scenario_names()) std::cout << name << '\n';
        return 0;
      }
      if (scenario_arg.empty()) throw vaf::InputError("simulate needs a scenario");
      const std::string text =
          vaf::cli::with_overrides(vaf::cli::load_scenario_text(scenario_arg), overrides);
      const auto scenario = vaf::cli::parse_scenario(text, scenario_arg);
      std::optional<std::uint64_t> seed_override;
      if (app.count("--seed") > 0) seed_override = seed;
      emit(vaf::cli::cmd_simulate(scenario, seed_override), out_dir, false);
    }
  } catch (const vaf::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vaf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vaf::SimulationLogicError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
