// Copyright 2026 The Varco Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include "varco/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "varco/error.hpp"
#include "varco/text.hpp"

namespace varco {

SchedulerKind parse_scheduler_kind(std::string_view name) {
  if (name == "fixed") return SchedulerKind::fixed;
  if (name == "step") return SchedulerKind::step;
  if (name == "linear") return SchedulerKind::linear;
  if (name == "exponential") return SchedulerKind::exponential;
  if (name == "clamped-linear") return SchedulerKind::clamped_linear;
  throw InvalidArgument("unknown scheduler kind \"" + std::string(name) + "\"");
}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::fixed:
      return "fixed";
    case SchedulerKind::step:
      return "step";
    case SchedulerKind::linear:
      return "linear";
    case SchedulerKind::exponential:
      return "exponential";
    case SchedulerKind::clamped_linear:
      return "clamped-linear";
  }
  return "unknown";
}

SchedulerSpec SchedulerSpec::fixed(double ratio, std::uint32_t horizon) {
  SchedulerSpec s;
  s.kind = SchedulerKind::fixed;
  s.c_max = ratio;
  s.c_min = ratio;
  s.horizon = horizon;
  return s;
}

void validate(const SchedulerSpec& spec) {
  if (!(spec.c_min >= 1.0)) throw InvalidArgument("scheduler c_min must be >= 1");
  if (!(spec.c_max >= spec.c_min) || !std::isfinite(spec.c_max)) {
    throw InvalidArgument("scheduler c_max must be finite and >= c_min");
  }
  if (spec.horizon == 0) throw InvalidArgument("scheduler horizon must be positive");
  if (!std::isfinite(spec.slope)) throw InvalidArgument("scheduler slope must be finite");
  if (spec.kind == SchedulerKind::step && !(spec.step >= 0.0)) {
    throw InvalidArgument("step scheduler increment must be >= 0");
  }
  if (spec.kind == SchedulerKind::exponential && !(spec.base >= 1.0)) {
    throw InvalidArgument("exponential scheduler base must be >= 1");
  }
}

double ratio_at(const SchedulerSpec& spec, std::uint32_t t) {
  validate(spec);
  if (t > spec.horizon) {
    throw InvalidArgument("step " + std::to_string(t) + " beyond horizon " +
                          std::to_string(spec.horizon));
  }
  const double td = static_cast<double>(t);
  const double horizon = static_cast<double>(spec.horizon);
  switch (spec.kind) {
    case SchedulerKind::fixed:
      return spec.c_max;
    case SchedulerKind::clamped_linear: {
      // Progress is computed first so that a t/T = 1 lands exactly on c_min.
      const double progress = spec.slope * td / horizon;
      if (progress >= 1.0) return spec.c_min;
      return std::clamp(spec.c_max - progress * (spec.c_max - spec.c_min), spec.c_min,
                        spec.c_max);
    }
    case SchedulerKind::linear:
      return std::max(spec.c_max - spec.slope * td, spec.c_min);
    case SchedulerKind::step: {
      const double fraction = 1.0 / spec.c_max + spec.step * td;
      return std::clamp(1.0 / fraction, spec.c_min, spec.c_max);
    }
    case SchedulerKind::exponential:
      return std::clamp(std::pow(spec.base, horizon - td + 1.0), spec.c_min, spec.c_max);
  }
  return spec.c_max;
}

MonotoneReport validate_monotone(const SchedulerSpec& spec) {
  MonotoneReport report;
  double previous = 0.0;
  for (std::uint32_t t = 0; t <= spec.horizon; ++t) {
    const double r = ratio_at(spec, t);
    std::string problem;
    if (r < spec.c_min || r > spec.c_max) {
      problem = "ratio " + format_double(r) + " outside [" + format_double(spec.c_min) + ", " +
                format_double(spec.c_max) + "]";
    } else if (t > 0 && r > previous) {
      problem = "ratio increases from " + format_double(previous) + " to " + format_double(r);
    }
    if (!problem.empty()) {
      report.ok = false;
      report.first_violation = t;
      report.message = "t=" + std::to_string(t) + ": " + problem;
      return report;
    }
    previous = r;
  }
  return report;
}

}  // namespace varco
