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

#include "vaf/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "vaf/cli/units.hpp"
#include "vaf/errors.hpp"

namespace vaf::cli {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw SimulationLogicError("csv row has " + std::to_string(cells.size()) +
                               " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render(const RunMetadata& meta) const {
  std::ostringstream out;
  out << "# scenario=" << meta.scenario_hash << " seed=" << meta.seed << " version=" << kVersion
      << '\n';
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "");
      const std::string& cell = cells[i];
      if (cell.find_first_of(",\"\n") == std::string::npos) {
        out << cell;
        continue;
      }
      out << '"';
      for (char c : cell) out << (c == '"' ? "\"\"" : std::string(1, c));
      out << '"';
    }
    out << '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
  return out.str();
}

std::vector<model::RampUpSample> read_samples(std::istream& in, std::string_view origin) {
  std::vector<model::RampUpSample> samples;
  std::string text;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& why) {
    throw InputError(std::string(origin) + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      if (text != "t,n") fail("expected header 't,n', got '" + text + "'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      fail("expected two fields 't,n'");
    }
    model::RampUpSample s;
    try {
      s.t = parse_number(std::string_view(text).substr(0, comma));
      s.n = parse_number(std::string_view(text).substr(comma + 1));
    } catch (const InputError& e) {
      fail(e.what());
    }
    if (s.t < 0.0) fail("t must be >= 0");
    if (s.n < 0.0) fail("n must be >= 0");
    samples.push_back(s);
  }
  if (!header_seen) {
    throw InputError(std::string(origin) + ": missing 't,n' header");
  }
  return samples;
}

}  // namespace vaf::cli
