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

#include <string>
#include <string_view>

namespace vaf::cli {

/// Parses a duration such as "90", "90s", "2.5min", "48h" or "10d" into
/// seconds. A bare number is taken as seconds. Throws InputError.
double parse_duration(std::string_view text);

/// Parses a rate such as "1215.6/h" or "0.3/s" into events per second. A
/// bare number is taken as per second.
double parse_rate(std::string_view text);

double parse_number(std::string_view text);
long long parse_integer(std::string_view text);

/// Seconds per unit for "s", "min", "h" and "d".
double unit_seconds(std::string_view unit);

/// Shortest round-trippable rendering of a double, stable across runs.
std::string format_number(double value);

}  // namespace vaf::cli
