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

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "vaf/analytic_model.hpp"
#include "vaf/errors.hpp"

namespace vaf::model {

namespace {

constexpr int kMaxIterations = 500;

void check_samples(std::span<const RampUpSample> samples) {
  if (samples.size() < 3) {
    throw InputError("ramp-up fit needs at least 3 samples, got " +
                     std::to_string(samples.size()));
  }
  std::set<double> distinct_positive_t;
  double previous_t = -1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.n) || s.t < 0.0 || s.n < 0.0) {
      throw InputError("sample " + std::to_string(i) + " must have finite t >= 0 and n >= 0");
    }
    if (s.t <= previous_t) {
      throw InputError("sample " + std::to_string(i) + " is not strictly increasing in t");
    }
    previous_t = s.t;
    if (s.t > 0.0) {
      distinct_positive_t.insert(s.t);
    }
  }
  if (distinct_positive_t.size() < 2) {
    throw InputError("ramp-up fit needs at least 2 distinct t > 0");
  }
}

// Weighted regression of 1/n on 1/t: 1/n = (1/p0) * (1/t) + p1/p0.
RampUpParams linearised_guess(std::span<const RampUpSample> samples) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  double best_rate = 0.0;
  for (const auto& s : samples) {
    if (s.t <= 0.0 || s.n <= 0.0) {
      continue;
    }
    best_rate = std::max(best_rate, s.n / s.t);
    const double w = s.n * s.n;
    const double x = 1.0 / s.t;
    const double y = 1.0 / s.n;
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  if (best_rate <= 0.0) {
    throw InputError("ramp-up fit needs at least one sample with t > 0 and n > 0");
  }
  const double det = sw * sxx - sx * sx;
  if (det > 0.0) {
    const double slope = (sw * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / sw;
    if (slope > 0.0) {
      const double p0 = 1.0 / slope;
      return {p0, std::max(0.0, intercept * p0)};
    }
  }
  return {best_rate, 0.0};
}

double sum_squares(std::span<const RampUpSample> samples, const RampUpParams& p) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double r = s.n - p.p0 * s.t / (1.0 + p.p1 * s.t);
    total += r * r;
  }
  return total;
}

}  // namespace

FitResult fit_rampup(std::span<const RampUpSample> samples) {
  check_samples(samples);

  FitResult result;
  result.initial = linearised_guess(samples);
  RampUpParams current = result.initial;
  double cost = sum_squares(samples, current);
  double lambda = 1e-3;

  int iteration = 0;
  for (; iteration < kMaxIterations; ++iteration) {
    // Normal equations J^T J and J^T r of the residuals n - model.
    std::array<double, 3> jtj{};  // (00, 01, 11)
    std::array<double, 2> jtr{};
    for (const auto& s : samples) {
      const double denom = 1.0 + current.p1 * s.t;
      const double model = current.p0 * s.t / denom;
      const double r = s.n - model;
      const double d0 = s.t / denom;
      const double d1 = -current.p0 * s.t * s.t / (denom * denom);
      jtj[0] += d0 * d0;
      jtj[1] += d0 * d1;
      jtj[2] += d1 * d1;
      jtr[0] += d0 * r;
      jtr[1] += d1 * r;
    }

    bool improved = false;
    RampUpParams candidate = current;
    double candidate_cost = cost;
    while (lambda < 1e16) {
      const double a = jtj[0] * (1.0 + lambda);
      const double b = jtj[1];
      const double d = jtj[2] * (1.0 + lambda);
      const double det = a * d - b * b;
      if (det > 0.0 && std::isfinite(det)) {
        candidate.p0 = current.p0 + (d * jtr[0] - b * jtr[1]) / det;
        candidate.p1 = std::max(0.0, current.p1 + (a * jtr[1] - b * jtr[0]) / det);
        if (candidate.p0 > 0.0) {
          candidate_cost = sum_squares(samples, candidate);
          if (candidate_cost <= cost) {
            improved = true;
            break;
          }
        }
      }
      lambda *= 10.0;
    }
    if (!improved) {
      break;  // no descent direction left: at a minimum to working precision
    }

    const double step = std::max(std::abs(candidate.p0 - current.p0) / current.p0,
                                 std::abs(candidate.p1 - current.p1) /
                                     std::max(current.p1, 1e-300));
    const bool flat = cost - candidate_cost <= 1e-15 * std::max(cost, 1e-300);
    current = candidate;
    cost = candidate_cost;
    lambda = std::max(lambda / 10.0, 1e-12);
    if (step < 1e-13 || (flat && step < 1e-9)) {
      ++iteration;
      break;
    }
  }

  if (iteration >= kMaxIterations) {
    std::ostringstream os;
    os << "p0=" << current.p0 << " p1=" << current.p1 << " cost=" << cost
       << " lambda=" << lambda;
    throw NumericError("ramp-up fit did not converge", os.str());
  }

  result.params = current;
  result.residual_norm = std::sqrt(cost);
  result.iterations = iteration;
  return result;
}

}  // namespace vaf::model
