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

#include "vaf/analytic_model.hpp"

#include <cmath>
#include <sstream>

#include "vaf/errors.hpp"

namespace vaf::model {

namespace {

constexpr int kInversionBudget = 200;
constexpr double kInversionTolerance = 1e-12;

void require_finite_non_negative(double value, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream os;
    os << what << " must be finite and >= 0, got " << value;
    throw DomainError(os.str());
  }
}

void require_positive_work(double work) {
  if (!std::isfinite(work) || work <= 0.0) {
    std::ostringstream os;
    os << "serialized work must be finite and > 0, got " << work;
    throw DomainError(os.str());
  }
}

// (x - log(1 + x)) / x^2, accurate down to x = 0.
double reduced_integral(double x) {
  if (x < kSeriesThreshold) {
    return 0.5 - x / 3.0 + x * x / 4.0 - x * x * x / 5.0;
  }
  return (x - std::log1p(x)) / (x * x);
}

}  // namespace

void RampUpParams::validate() const {
  if (!std::isfinite(p0) || p0 <= 0.0) {
    throw InputError("p0 must be finite and > 0");
  }
  if (!std::isfinite(p1) || p1 < 0.0) {
    throw InputError("p1 must be finite and >= 0");
  }
}

double running_jobs(const RampUpParams& params, double t) {
  params.validate();
  require_finite_non_negative(t, "time");
  return params.p0 * t / (1.0 + params.p1 * t);
}

double rampup_time(const RampUpParams& params, double n) {
  params.validate();
  require_finite_non_negative(n, "job count");
  const double denominator = params.p0 - params.p1 * n;
  if (denominator <= 0.0) {
    std::ostringstream os;
    os << "job count " << n << " is unreachable: saturation at p0/p1 = "
       << params.max_jobs();
    throw DomainError(os.str());
  }
  return n / denominator;
}

double pull_serialized_time(const RampUpParams& params, double t_prime) {
  params.validate();
  require_finite_non_negative(t_prime, "time to results");
  // p0/p1^2 * (x - log(1+x)) with x = p1*t', rewritten as p0*t'^2 * h(x) so
  // that p1 == 0 needs no special case.
  return params.p0 * t_prime * t_prime * reduced_integral(params.p1 * t_prime);
}

double pull_time_to_results(const RampUpParams& params, double work) {
  params.validate();
  require_positive_work(work);

  auto residual = [&](double t) { return pull_serialized_time(params, t) - work; };

  // Without saturation the work would be p0*t^2/2, an upper bound on the
  // integral, so its inverse is a lower bracket.
  double lo = std::sqrt(2.0 * work / params.p0);
  double hi = lo;
  int iterations = 0;
  if (residual(lo) >= 0.0) {
    return lo;
  }
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++iterations > kInversionBudget || !std::isfinite(hi)) {
      std::ostringstream os;
      os << "p0=" << params.p0 << " p1=" << params.p1 << " work=" << work
         << " bracket=[" << lo << "," << hi << "] iterations=" << iterations;
      throw NumericError("failed to bracket the pull time to results", os.str());
    }
  }

  // Newton steps on the monotone residual, falling back to bisection when
  // the step leaves the bracket.
  double t = 0.5 * (lo + hi);
  while (iterations++ < kInversionBudget) {
    const double f = residual(t);
    if (f == 0.0) {
      return t;
    }
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double slope = running_jobs(params, t);
    double next = slope > 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - t) <= kInversionTolerance * next ||
        (hi - lo) <= kInversionTolerance * hi) {
      return next;
    }
    t = next;
  }
  std::ostringstream os;
  os << "p0=" << params.p0 << " p1=" << params.p1 << " work=" << work << " t=" << t
     << " bracket=[" << lo << "," << hi << "] residual=" << residual(t);
  throw NumericError("pull time to results did not converge", os.str());
}

double optimal_job_count(const RampUpParams& params, double work) {
  params.validate();
  require_positive_work(work);
  const double root_work = std::sqrt(work);
  return params.p0 * root_work / (std::sqrt(params.p0) + params.p1 * root_work);
}

double push_time_at(const RampUpParams& params, double work, double n_jobs) {
  params.validate();
  require_positive_work(work);
  if (!std::isfinite(n_jobs) || n_jobs <= 0.0 ||
      params.p0 - params.p1 * n_jobs <= 0.0) {
    std::ostringstream os;
    os << "job count " << n_jobs << " outside (0, " << params.max_jobs() << ")";
    throw DomainError(os.str());
  }
  return n_jobs / (params.p0 - params.p1 * n_jobs) + work / n_jobs;
}

double push_time_to_results(const RampUpParams& params, double work) {
  params.validate();
  require_positive_work(work);
  return (2.0 * std::sqrt(params.p0 * work) + params.p1 * work) / params.p0;
}

double speedup_ratio(const RampUpParams& params, double work) {
  return pull_time_to_results(params, work) / push_time_to_results(params, work);
}

double reduced_speedup_ratio(double tau) {
  require_finite_non_negative(tau, "reduced work");
  if (tau == 0.0) {
    return 1.0 / std::sqrt(2.0);
  }
  // With p0 = p1 = 1 the work equals tau and times are in units of 1/p1.
  const RampUpParams unit{1.0, 1.0};
  return pull_time_to_results(unit, tau) / push_time_to_results(unit, tau);
}

RatioMinimum speedup_ratio_minimum() {
  // Golden-section search in log(tau); the ratio is unimodal there.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(1e-4);
  double b = std::log(10.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = reduced_speedup_ratio(std::exp(c));
  double fd = reduced_speedup_ratio(std::exp(d));
  for (int i = 0; i < 200 && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = reduced_speedup_ratio(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = reduced_speedup_ratio(std::exp(d));
    }
  }
  const double tau = std::exp(0.5 * (a + b));
  return {tau, reduced_speedup_ratio(tau)};
}

}  // namespace vaf::model
