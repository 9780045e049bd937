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

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "vaf/analytic_model.hpp"
#include "vaf/errors.hpp"

// Both claimed times scale with 1/p1 at fixed reduced work tau = T*p1^2/p0,
// and their ratio depends on tau alone. Calibration therefore solves the 1-D
// problem ratio(tau) = t_pull/t_push and then recovers the scale from t_push:
//   p1 = sqrt(tau) * (2 + sqrt(tau)) / t_push
//   p0 = T * (2 + sqrt(tau))^2 / t_push^2
// The ratio falls from 1/sqrt(2) to a minimum and then rises towards 1, so a
// target below 1/sqrt(2) has one root on each side of the minimum.

namespace vaf::model {

namespace {

constexpr double kClaimTolerance = 1e-6;

// Bisection for ratio(tau) == target on [lo, hi] where the ratio is monotone.
double solve_branch(double target, double lo, double hi, bool increasing) {
  for (int i = 0; i < 400 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool below = reduced_speedup_ratio(mid) < target;
    if (below == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RampUpParams params_from_tau(double work, double t_push, double tau) {
  const double root = std::sqrt(tau);
  return {work * (2.0 + root) * (2.0 + root) / (t_push * t_push),
          root * (2.0 + root) / t_push};
}

double preference_distance(const RampUpParams& p, double preferred) {
  const double max_jobs = p.max_jobs();
  if (std::isinf(preferred)) {
    return std::isinf(max_jobs) ? 0.0 : 1.0 / max_jobs;
  }
  if (std::isinf(max_jobs)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(std::log(max_jobs / preferred));
}

}  // namespace

CalibrationResult calibrate_from_claims(double work, double t_pull, double t_push,
                                        const CalibrationOptions& options) {
  if (!std::isfinite(work) || work <= 0.0) {
    throw InputError("serialized work must be finite and > 0");
  }
  if (!std::isfinite(t_pull) || !std::isfinite(t_push) || t_pull <= 0.0) {
    throw InputError("claimed times must be finite and > 0");
  }
  if (t_pull >= t_push) {
    throw InputError("pull time to results must be below the push one");
  }
  if (!(options.preferred_max_jobs > 0.0)) {
    throw InputError("preferred job ceiling must be > 0");
  }

  const double target = t_pull / t_push;
  const RatioMinimum minimum = speedup_ratio_minimum();
  if (target < minimum.ratio) {
    std::ostringstream os;
    os << "ratio=" << target << " minimum=" << minimum.ratio << " at tau=" << minimum.tau;
    throw NumericError("claims are faster than any ramp-up curve allows", os.str());
  }

  std::vector<double> roots;
  // Falling branch, (0, tau_min].
  const double limit = 1.0 / std::sqrt(2.0);
  if (target >= limit) {
    roots.push_back(0.0);  // kept only if it reproduces the claims
  } else {
    roots.push_back(solve_branch(target, 0.0, minimum.tau, false));
  }
  // Rising branch, [tau_min, inf).
  double upper = std::max(1.0, minimum.tau);
  while (reduced_speedup_ratio(upper) < target) {
    upper *= 10.0;
    if (upper > 1e250) {
      std::ostringstream os;
      os << "ratio=" << target << " tau=" << upper;
      throw NumericError("could not bracket the rising calibration branch", os.str());
    }
  }
  roots.push_back(solve_branch(target, minimum.tau, upper, true));

  std::vector<CalibrationResult> accepted;
  for (double tau : roots) {
    CalibrationResult candidate;
    candidate.params = params_from_tau(work, t_push, tau);
    candidate.reduced_work = tau;
    candidate.pull_residual =
        std::abs(pull_time_to_results(candidate.params, work) - t_pull) / t_pull;
    candidate.push_residual =
        std::abs(push_time_to_results(candidate.params, work) - t_push) / t_push;
    if (candidate.pull_residual > kClaimTolerance || candidate.push_residual > kClaimTolerance) {
      continue;
    }
    accepted.push_back(candidate);
  }
  std::optional<CalibrationResult> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (auto& candidate : accepted) {
    candidate.branches = static_cast<int>(accepted.size());
    const double distance = preference_distance(candidate.params, options.preferred_max_jobs);
    if (!best || distance < best_distance) {
      best = candidate;
      best_distance = distance;
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "ratio=" << target << " candidates=" << roots.size();
    throw NumericError("no calibration branch reproduces the claims", os.str());
  }
  return *best;
}

}  // namespace vaf::model
