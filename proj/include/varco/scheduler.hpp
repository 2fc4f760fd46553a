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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace varco {

// Compression-ratio policies r(t), all expressed as ratios r >= 1.
//
//   fixed           r(t) = c_max
//   clamped-linear  r(t) = clamp(c_max - a (c_max - c_min) t / T, c_min, c_max)
//   linear          r(t) = max(c_max - a t, c_min)
//   step            communicated fraction grows by a constant increment R per
//                   step, f(t) = 1/c_max + R t;  r(t) = clamp(1 / f(t), c_min, c_max)
//   exponential     communicated fraction f(t) = base^-(T - t + 1);
//                   r(t) = clamp(base^(T - t + 1), c_min, c_max)
// with T = horizon (total steps) and t in [0, T].
enum class SchedulerKind { fixed, step, linear, exponential, clamped_linear };

SchedulerKind parse_scheduler_kind(std::string_view name);
std::string_view to_string(SchedulerKind kind);

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::clamped_linear;
  double c_max = 128.0;
  double c_min = 1.0;
  double slope = 5.0;  // a
  double step = 0.0;   // R
  double base = 2.0;   // beta
  std::uint32_t horizon = 300;

  static SchedulerSpec fixed(double ratio, std::uint32_t horizon);
};

// Throws InvalidArgument when c_min < 1, c_max < c_min, horizon == 0, or a
// kind-specific parameter is out of its domain (step < 0, base < 1).
void validate(const SchedulerSpec& spec);

double ratio_at(const SchedulerSpec& spec, std::uint32_t t);

struct MonotoneReport {
  bool ok = true;
  std::optional<std::uint32_t> first_violation;
  std::string message;
};

// Evaluates every t in [0, horizon] and reports the first t where the
// sequence increases or leaves [c_min, c_max].
MonotoneReport validate_monotone(const SchedulerSpec& spec);

}  // namespace varco
