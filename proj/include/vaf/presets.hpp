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

#include <optional>
#include <string_view>

#include "vaf/analytic_model.hpp"

namespace vaf::model {

/// Ramp-up of the CERN Grid site, in per-second units. The site's raw
/// parameters were never published; these are the unique solution of
/// calibrate_from_claims(240 h, 2.70 h, 3.30 h), i.e. p0 = 1215.587/h and
/// p1 = 12.2132/h (job ceiling about 99.5).
inline constexpr RampUpParams kCern2013{1215.5868258264504 / 3600.0,
                                         12.213232271805081 / 3600.0};

/// Looks up a named ramp-up preset; only "cern-2013" exists.
inline std::optional<RampUpParams> rampup_preset(std::string_view name) {
  if (name == "cern-2013") {
    return kCern2013;
  }
  return std::nullopt;
}

}  // namespace vaf::model
