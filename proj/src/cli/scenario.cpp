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

#include "vaf/cli/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vaf/cli/csv.hpp"
#include "vaf/cli/units.hpp"
#include "vaf/errors.hpp"
#include "vaf/presets.hpp"

namespace vaf::cli {

namespace {

struct Entry {
  std::string section;  // empty for the preamble
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> words(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

const std::set<std::string> kSections{"model", "workload", "arrivals", "cloud", "elastiq",
                                      "output"};

class Reader {
 public:
  Reader(std::string_view text, std::string_view origin) : origin_(origin) {
    std::istringstream in{std::string(text)};
    std::string section;
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
      ++line_no;
      std::string line = raw;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (!kSections.count(section)) fail(line_no, "unknown section [" + section + "]");
        sections_.insert(section);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
      Entry e{section, trim(std::string_view(line).substr(0, eq)),
              trim(std::string_view(line).substr(eq + 1)), line_no};
      if (e.key.empty()) fail(line_no, "missing key");
      if (e.value.empty()) fail(line_no, path(e) + ": missing value");
      entries_.push_back(std::move(e));
    }
  }

  [[noreturn]] void fail(std::size_t line, const std::string& why) const {
    throw InputError(origin_ + (line ? ":" + std::to_string(line) : std::string()) + ": " + why);
  }

  [[noreturn]] void fail(const Entry& e, const std::string& why) const {
    fail(e.line, path(e) + ": " + why);
  }

  static std::string path(const Entry& e) {
    return e.section.empty() ? e.key : e.section + "." + e.key;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  const std::string& origin() const { return origin_; }

  std::string canonical() const {
    std::string out;
    for (const auto& e : entries_) out += path(e) + "=" + e.value + "\n";
    return out;
  }

 private:
  std::string origin_;
  std::vector<Entry> entries_;
  std::set<std::string> sections_;
};

template <typename Fn>
auto guarded(const Reader& reader, const Entry& e, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& err) {
    reader.fail(e, err.what());
  }
}

double positive(const Reader& r, const Entry& e, double v) {
  if (!(v > 0.0)) r.fail(e, "must be > 0");
  return v;
}

double non_negative(const Reader& r, const Entry& e, double v) {
  if (v < 0.0) r.fail(e, "must be >= 0");
  return v;
}

std::size_t count_value(const Reader& r, const Entry& e, long long min) {
  const long long v = guarded(r, e, [&] { return parse_integer(e.value); });
  if (v < min) r.fail(e, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

bool flag(const Reader& r, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  r.fail(e, "expected true or false");
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  const Reader reader(text, origin);
  Scenario s;
  s.hash = fnv1a_hex(reader.canonical());

  std::optional<std::string> source;
  std::optional<std::string> model_preset;
  std::optional<double> p0;
  std::optional<double> p1;
  std::optional<cloud::BootLatency> latency_preset;
  std::optional<double> latency_mean;
  std::optional<double> latency_stddev;
  std::set<std::string> used;  // keys seen, for source consistency checks
  const Entry* first_of_kind[3] = {nullptr, nullptr, nullptr};  // worker, submit, terminate

  auto duration = [&](const Entry& e) { return guarded(reader, e, [&] { return parse_duration(e.value); }); };
  auto number = [&](const Entry& e) { return guarded(reader, e, [&] { return parse_number(e.value); }); };

  for (const auto& e : reader.entries()) {
    const std::string key = Reader::path(e);
    const bool repeatable = key == "arrivals.worker" || key == "arrivals.submit" ||
                            key == "arrivals.terminate" || key == "workload.locality";
    if (!repeatable && !used.insert(key).second) {
      reader.fail(e, "given more than once");
    }
    if (key == "name") {
      s.name = e.value;
    } else if (key == "seed") {
      s.seed = count_value(reader, e, 0);
    } else if (key == "model.preset") {
      if (!model::rampup_preset(e.value)) reader.fail(e, "unknown ramp-up preset '" + e.value + "'");
      model_preset = e.value;
    } else if (key == "model.p0") {
      p0 = positive(reader, e, guarded(reader, e, [&] { return parse_rate(e.value); }));
    } else if (key == "model.p1") {
      p1 = non_negative(reader, e, guarded(reader, e, [&] { return parse_rate(e.value); }));
    } else if (key == "workload.total_work") {
      s.workload.total_work = positive(reader, e, duration(e));
    } else if (key == "workload.packet_target") {
      s.workload.packet_target = positive(reader, e, duration(e));
    } else if (key == "workload.locality") {
      const auto colon = e.value.find(':');
      if (colon == std::string::npos) reader.fail(e, "expected 'node:fraction'");
      const double fraction = guarded(reader, e, [&] { return parse_number(e.value.substr(colon + 1)); });
      s.workload.locality.push_back({trim(e.value.substr(0, colon)), fraction});
    } else if (key == "arrivals.source") {
      if (e.value != "explicit" && e.value != "rampup" && e.value != "elastic") {
        reader.fail(e, "expected explicit, rampup or elastic");
      }
      source = e.value;
    } else if (key == "arrivals.scheduler") {
      if (e.value == "pull") s.scheduler = SchedulerChoice::kPull;
      else if (e.value == "push") s.scheduler = SchedulerChoice::kPush;
      else if (e.value == "both") s.scheduler = SchedulerChoice::kBoth;
      else reader.fail(e, "expected pull, push or both");
    } else if (key == "arrivals.workers") {
      s.max_workers = count_value(reader, e, 1);
    } else if (key == "arrivals.init") {
      s.init_duration = non_negative(reader, e, duration(e));
    } else if (key == "arrivals.speed") {
      s.speed = positive(reader, e, number(e));
    } else if (key == "arrivals.master_poll_interval") {
      s.pull.master_poll_interval = non_negative(reader, e, duration(e));
    } else if (key == "arrivals.push_jobs") {
      s.push_jobs = count_value(reader, e, 1);
    } else if (key == "arrivals.worker") {
      // id arrival [init [speed [node]]]
      const auto w = words(e.value);
      if (w.size() < 2 || w.size() > 5) reader.fail(e, "expected 'id arrival [init [speed [node]]]'");
      sched::WorkerRecord record;
      record.id = w[0];
      guarded(reader, e, [&] {
        record.arrival_time = parse_duration(w[1]);
        if (w.size() > 2) record.init_duration = parse_duration(w[2]);
        if (w.size() > 3) record.speed = parse_number(w[3]);
        return 0;
      });
      if (w.size() > 4) record.local_node = w[4];
      if (record.arrival_time < 0.0 || record.init_duration < 0.0 || !(record.speed > 0.0)) {
        reader.fail(e, "arrival and init must be >= 0, speed > 0");
      }
      s.workers.push_back(record);
      if (!first_of_kind[0]) first_of_kind[0] = &e;
    } else if (key == "arrivals.submit") {
      // time count duration
      const auto w = words(e.value);
      if (w.size() != 3) reader.fail(e, "expected 'time count duration'");
      autoscale::Submission sub;
      guarded(reader, e, [&] {
        sub.time = parse_duration(w[0]);
        const long long count = parse_integer(w[1]);
        if (count < 1) throw InputError("job count must be >= 1");
        sub.count = static_cast<std::size_t>(count);
        sub.duration = parse_duration(w[2]);
        return 0;
      });
      if (sub.time < 0.0 || !(sub.duration > 0.0)) reader.fail(e, "time must be >= 0, duration > 0");
      s.elastic.script.push_back(sub);
      if (!first_of_kind[1]) first_of_kind[1] = &e;
    } else if (key == "arrivals.terminate") {
      const auto w = words(e.value);
      if (w.size() != 2) reader.fail(e, "expected 'time instance_id'");
      autoscale::ForcedTermination kill;
      kill.time = non_negative(reader, e, guarded(reader, e, [&] { return parse_duration(w[0]); }));
      kill.instance_id = w[1];
      s.elastic.terminations.push_back(kill);
      if (!first_of_kind[2]) first_of_kind[2] = &e;
    } else if (key == "arrivals.horizon") {
      s.elastic.horizon = positive(reader, e, duration(e));
    } else if (key == "cloud.capacity") {
      s.elastic.cloud.capacity = count_value(reader, e, 1);
    } else if (key == "cloud.boot_latency") {
      latency_preset = cloud::boot_latency_preset(e.value);
      if (!latency_preset) reader.fail(e, "unknown boot latency preset '" + e.value + "'");
    } else if (key == "cloud.boot_latency_mean") {
      latency_mean = positive(reader, e, duration(e));
    } else if (key == "cloud.boot_latency_stddev") {
      latency_stddev = non_negative(reader, e, duration(e));
    } else if (key == "cloud.slots") {
      s.elastic.cloud.slots = static_cast<int>(count_value(reader, e, 1));
    } else if (key == "cloud.registration_delay") {
      s.elastic.cloud.registration_delay = non_negative(reader, e, duration(e));
    } else if (key == "cloud.teardown_delay") {
      s.elastic.cloud.teardown_delay = non_negative(reader, e, duration(e));
    } else if (key == "cloud.fail_first") {
      s.elastic.cloud.failure_plan.fail_first = count_value(reader, e, 0);
    } else if (key == "cloud.fail_probability") {
      const double q = number(e);
      if (q < 0.0 || q > 1.0) reader.fail(e, "must be within [0, 1]");
      s.elastic.cloud.failure_plan.fail_probability = q;
    } else if (key == "elastiq.poll_interval") {
      s.elastic.elastiq.poll_interval = positive(reader, e, duration(e));
    } else if (key == "elastiq.waiting_jobs_threshold") {
      s.elastic.elastiq.waiting_jobs_threshold = count_value(reader, e, 0);
    } else if (key == "elastiq.waiting_time_threshold") {
      s.elastic.elastiq.waiting_time_threshold = non_negative(reader, e, duration(e));
    } else if (key == "elastiq.jobs_per_vm") {
      s.elastic.elastiq.jobs_per_vm = count_value(reader, e, 1);
    } else if (key == "elastiq.idle_time_threshold") {
      s.elastic.elastiq.idle_time_threshold = non_negative(reader, e, duration(e));
    } else if (key == "elastiq.min_quota") {
      s.elastic.elastiq.min_quota = count_value(reader, e, 0);
    } else if (key == "elastiq.max_quota") {
      s.elastic.elastiq.max_quota = count_value(reader, e, 1);
    } else if (key == "output.trace") {
      s.trace = flag(reader, e);
    } else {
      reader.fail(e, "unknown key");
    }
  }

  if (!source) {
    reader.fail(0, "arrivals.source: required (explicit, rampup or elastic)");
  }
  auto only_for = [&](const Entry* e, const char* what) {
    if (e) reader.fail(*e, std::string("only valid with source = ") + what);
  };
  if (*source == "elastic") {
    s.source = ArrivalSource::kElastic;
    only_for(first_of_kind[0], "explicit");
    for (const char* k : {"model", "workload"}) {
      if (reader.has_section(k)) {
        reader.fail(0, std::string("[") + k + "] does not apply to source = elastic");
      }
    }
  } else {
    s.source = *source == "explicit" ? ArrivalSource::kExplicit : ArrivalSource::kRampUp;
    only_for(first_of_kind[1], "elastic");
    only_for(first_of_kind[2], "elastic");
    for (const char* k : {"cloud", "elastiq"}) {
      if (reader.has_section(k)) {
        reader.fail(0, std::string("[") + k + "] only applies to source = elastic");
      }
    }
    if (s.source == ArrivalSource::kExplicit) {
      if (s.workers.empty()) reader.fail(0, "arrivals.worker: explicit arrivals need at least one worker");
    } else {
      only_for(first_of_kind[0], "explicit");
    }
    if (model_preset && (p0 || p1)) {
      reader.fail(0, "model: give either preset or p0/p1, not both");
    }
    if (model_preset) {
      s.params = model::rampup_preset(*model_preset);
    } else if (p0 || p1) {
      if (!p0 || !p1) reader.fail(0, "model: p0 and p1 go together");
      s.params = model::RampUpParams{*p0, *p1};
    }
    if (s.source == ArrivalSource::kRampUp && !s.params) {
      reader.fail(0, "model: ramp-up arrivals need a preset or p0/p1");
    }
    if (!(s.workload.total_work > 0.0)) {
      reader.fail(0, "workload.total_work: required");
    }
    guarded(reader, Entry{"workload", "locality", "", 0}, [&] {
      s.workload.validate();
      return 0;
    });
  }

  auto& cloud = s.elastic.cloud;
  if (latency_preset) cloud.boot_latency = *latency_preset;
  if (latency_mean) cloud.boot_latency.mean = *latency_mean;
  if (latency_stddev) cloud.boot_latency.stddev = *latency_stddev;
  s.elastic.seed = s.seed;
  s.elastic.record_trace = s.trace;
  s.pull.record_trace = s.trace;
  if (s.source == ArrivalSource::kElastic) {
    try {
      s.elastic.validate();
    } catch (const InputError& e) {
      reader.fail(0, std::string("elastic scenario: ") + e.what());
    }
  }
  return s;
}

std::string with_overrides(std::string text, const std::vector<std::string>& overrides) {
  if (!text.empty() && text.back() != '\n') text += '\n';
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw InputError("override '" + o + "' must look like section.key=value");
    }
    const std::string path = trim(std::string_view(o).substr(0, eq));
    const auto dot = path.find('.');
    const std::string value = trim(std::string_view(o).substr(eq + 1));
    if (dot == std::string::npos) {
      throw InputError("override '" + o + "' must name a section, as in cloud.slots=2");
    }
    text += "[" + path.substr(0, dot) + "]\n" + path.substr(dot + 1) + " = " + value + "\n";
  }
  return text;
}

namespace {

const std::map<std::string, std::string, std::less<>>& builtins() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"boot-latency-10vm",
       "name = boot-latency-10vm\n"
       "seed = 1\n"
       "[arrivals]\n"
       "source = elastic\n"
       "submit = 0s 10 1h\n"
       "[cloud]\n"
       "boot_latency = cern-2013\n"
       "slots = 1\n"
       "[elastiq]\n"
       "jobs_per_vm = 1\n"
       "max_quota = 10\n"},
      {"cern-pull-240h",
       "name = cern-pull-240h\n"
       "seed = 1\n"
       "[model]\n"
       "preset = cern-2013\n"
       "[workload]\n"
       "total_work = 240h\n"
       "packet_target = 10s\n"
       "[arrivals]\n"
       "source = rampup\n"
       "scheduler = both\n"},
  };
  return table;
}

}  // namespace

std::optional<std::string> builtin_scenario(std::string_view name) {
  const auto it = builtins().find(name);
  if (it == builtins().end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtins()) names.push_back(name);
  return names;
}

std::string load_scenario_text(const std::string& name_or_path) {
  if (std::filesystem::is_regular_file(name_or_path)) {
    std::ifstream in(name_or_path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    if (!in && !in.eof()) throw InputError("cannot read '" + name_or_path + "'");
    return text.str();
  }
  if (auto text = builtin_scenario(name_or_path)) {
    return *text;
  }
  std::string known;
  for (const auto& n : builtin_scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("'" + name_or_path + "' is neither a scenario file nor a built-in (" + known +
                   ")");
}

}  // namespace vaf::cli
