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

#include <limits>
#include <span>
#include <string>
#include <vector>

// Closed-form pull-vs-push scheduling model.
//
// A site's ramp-up of running jobs follows n(t) = p0*t / (1 + p1*t). A pull
// scheduler keeps every started worker busy until the work runs out, so its
// serialized work is the integral of n(t). A push scheduler pre-splits the
// work into n' equal jobs and waits for the last one to start and finish.
//
// Every function here is unit-agnostic and pure: callers pick a time unit and
// express p0 (jobs per unit), p1 (1 per unit), times and work consistently.

namespace vaf::model {

struct RampUpParams {
  double p0 = 0.0;  // job arrival rate
  double p1 = 0.0;  // saturation rate

  /// Asymptotic job count p0/p1; +inf when p1 == 0.
  double max_jobs() const noexcept {
    return p1 > 0.0 ? p0 / p1 : std::numeric_limits<double>::infinity();
  }

  /// Throws InputError unless p0 > 0, p1 >= 0 and both are finite.
  void validate() const;

  bool operator==(const RampUpParams&) const = default;
};

struct RampUpSample {
  double t = 0.0;  // time since the first job started
  double n = 0.0;  // running jobs (real-valued to allow averaged traces)
};

/// Below this value of p1*t' the serialized-work integral is evaluated from
/// its power series instead of the closed form.
inline constexpr double kSeriesThreshold = 1e-4;

double running_jobs(const RampUpParams& params, double t);
double rampup_time(const RampUpParams& params, double n);

/// Serialized work completed by a pull scheduler after t' of wall-clock time.
double pull_serialized_time(const RampUpParams& params, double t_prime);

/// Inverse of pull_serialized_time: wall-clock time to finish `work`.
double pull_time_to_results(const RampUpParams& params, double work);

/// Job count minimising push_time_at for a given amount of work.
double optimal_job_count(const RampUpParams& params, double work);
double push_time_at(const RampUpParams& params, double work, double n_jobs);
double push_time_to_results(const RampUpParams& params, double work);

/// pull_time_to_results / push_time_to_results.
double speedup_ratio(const RampUpParams& params, double work);

/// The ratio only depends on the reduced work tau = work*p1^2/p0. Exposed so
/// calibration and sweeps can reason about its shape without picking units.
double reduced_speedup_ratio(double tau);

/// Location and value of the ratio's single interior minimum.
struct RatioMinimum {
  double tau = 0.0;
  double ratio = 0.0;
};
RatioMinimum speedup_ratio_minimum();

struct FitResult {
  RampUpParams params;
  double residual_norm = 0.0;  // sqrt of the sum of squared residuals
  int iterations = 0;
  RampUpParams initial;  // linearised starting point
};

/// Least-squares fit of n(t) to a ramp-up trace. Requires at least three
/// samples, two of them at distinct t > 0, strictly increasing in t.
FitResult fit_rampup(std::span<const RampUpSample> samples);

struct CalibrationOptions {
  /// When the claims admit several parameter sets, prefer the one whose
  /// p0/p1 is closest (in log distance) to this job ceiling. +inf prefers
  /// the unsaturated branch.
  double preferred_max_jobs = 100.0;
};

struct CalibrationResult {
  RampUpParams params;
  double pull_residual = 0.0;  // relative
  double push_residual = 0.0;  // relative
  int branches = 0;            // number of exact solutions found
  double reduced_work = 0.0;   // tau of the chosen branch
};

/// Reconstructs (p0, p1) from one observed pull/push time-to-results pair
/// for a known amount of serialized work.
CalibrationResult calibrate_from_claims(double work, double t_pull, double t_push,
                                        const CalibrationOptions& options = {});

}  // namespace vaf::model
