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

#include "vaf/cli/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "vaf/errors.hpp"

namespace vaf::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits "12.5h" into the number and its suffix.
std::pair<double, std::string_view> split_quantity(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end == text.data()) {
    throw InputError("'" + std::string(text) + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw InputError("'" + std::string(text) + "' is not finite");
  }
  return {value, trim(std::string_view(end, text.data() + text.size() - end))};
}

}  // namespace

double unit_seconds(std::string_view unit) {
  if (unit.empty() || unit == "s") return 1.0;
  if (unit == "min") return 60.0;
  if (unit == "h") return 3600.0;
  if (unit == "d") return 86400.0;
  throw InputError("unknown time unit '" + std::string(unit) + "' (use s, min, h or d)");
}

double parse_number(std::string_view text) {
  const auto [value, rest] = split_quantity(text);
  if (!rest.empty()) {
    throw InputError("'" + std::string(text) + "' has trailing characters");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw InputError("'" + std::string(text) + "' is not an integer");
  }
  return value;
}

double parse_duration(std::string_view text) {
  const auto [value, unit] = split_quantity(text);
  return value * unit_seconds(unit);
}

double parse_rate(std::string_view text) {
  const auto [value, rest] = split_quantity(text);
  if (rest.empty()) {
    return value;
  }
  if (rest.front() != '/') {
    throw InputError("rate '" + std::string(text) + "' must look like 12.5/h");
  }
  return value / unit_seconds(trim(rest.substr(1)));
}

std::string format_number(double value) {
  if (value == 0.0) {
    return "0";
  }
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) {
      break;
    }
  }
  return buf;
}

}  // namespace vaf::cli
