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

#include <gtest/gtest.h>

#include <cmath>

#include "varco/error.hpp"
#include "varco/scheduler.hpp"

namespace varco {
namespace {

SchedulerSpec clamped(double slope, std::uint32_t horizon) {
  SchedulerSpec s;
  s.kind = SchedulerKind::clamped_linear;
  s.c_max = 128;
  s.c_min = 1;
  s.slope = slope;
  s.horizon = horizon;
  return s;
}

TEST(Scheduler, ClampedLinearExamples) {
  const auto s = clamped(5, 300);
  EXPECT_EQ(ratio_at(s, 0), 128.0);
  for (std::uint32_t t = 60; t <= 300; ++t) EXPECT_EQ(ratio_at(s, t), 1.0) << t;
  EXPECT_GT(ratio_at(s, 59), 1.0);
  EXPECT_DOUBLE_EQ(ratio_at(s, 30), 128.0 - 0.5 * 127.0);
}

TEST(Scheduler, ClampedLinearReachesFloorAtCeil) {
  for (std::uint32_t horizon : {7u, 100u, 300u, 301u, 1000u}) {
    for (int a = 2; a <= 7; ++a) {
      const auto s = clamped(a, horizon);
      const auto hit = static_cast<std::uint32_t>(std::ceil(double(horizon) / a));
      for (std::uint32_t t = 0; t <= horizon; ++t) {
        if (t < hit) {
          EXPECT_GT(ratio_at(s, t), 1.0) << horizon << " " << a << " " << t;
        } else {
          EXPECT_EQ(ratio_at(s, t), 1.0) << horizon << " " << a << " " << t;
        }
      }
      EXPECT_TRUE(validate_monotone(s).ok);
    }
  }
}

TEST(Scheduler, FixedIsConstant) {
  const auto s = SchedulerSpec::fixed(4, 50);
  for (std::uint32_t t = 0; t <= 50; ++t) EXPECT_EQ(ratio_at(s, t), 4.0);
}

TEST(Scheduler, OtherKinds) {
  SchedulerSpec lin{.kind = SchedulerKind::linear, .c_max = 10, .c_min = 2, .slope = 3, .horizon = 10};
  EXPECT_EQ(ratio_at(lin, 0), 10.0);
  EXPECT_EQ(ratio_at(lin, 2), 4.0);
  EXPECT_EQ(ratio_at(lin, 3), 2.0);

  SchedulerSpec step{.kind = SchedulerKind::step, .c_max = 8, .c_min = 1, .step = 0.125, .horizon = 10};
  EXPECT_EQ(ratio_at(step, 0), 8.0);
  EXPECT_EQ(ratio_at(step, 1), 4.0);
  EXPECT_EQ(ratio_at(step, 3), 2.0);
  EXPECT_EQ(ratio_at(step, 7), 1.0);
  EXPECT_EQ(ratio_at(step, 10), 1.0);

  SchedulerSpec ex{.kind = SchedulerKind::exponential, .c_max = 64, .c_min = 1, .base = 2, .horizon = 10};
  EXPECT_EQ(ratio_at(ex, 0), 64.0);
  EXPECT_EQ(ratio_at(ex, 5), 64.0);
  EXPECT_EQ(ratio_at(ex, 6), 32.0);
  EXPECT_EQ(ratio_at(ex, 10), 2.0);
}

TEST(Scheduler, AllBuiltInKindsAreMonotone) {
  const SchedulerSpec specs[] = {
      SchedulerSpec::fixed(3, 100),
      clamped(5, 300),
      clamped(0.5, 300),
      {.kind = SchedulerKind::linear, .c_max = 128, .c_min = 1, .slope = 0.7, .horizon = 300},
      {.kind = SchedulerKind::step, .c_max = 128, .c_min = 1, .step = 0.01, .horizon = 300},
      {.kind = SchedulerKind::step, .c_max = 128, .c_min = 1, .step = 0.0, .horizon = 300},
      {.kind = SchedulerKind::exponential, .c_max = 128, .c_min = 1, .base = 1.05, .horizon = 300},
      {.kind = SchedulerKind::exponential, .c_max = 128, .c_min = 2, .base = 1.0, .horizon = 300},
  };
  for (const auto& s : specs) {
    const auto report = validate_monotone(s);
    EXPECT_TRUE(report.ok) << to_string(s.kind) << ": " << report.message;
    for (std::uint32_t t = 0; t <= s.horizon; ++t) {
      const double r = ratio_at(s, t);
      EXPECT_GE(r, s.c_min);
      EXPECT_LE(r, s.c_max);
    }
  }
}

TEST(Scheduler, IncreasingSpecIsReported) {
  SchedulerSpec up{.kind = SchedulerKind::linear, .c_max = 10, .c_min = 1, .slope = -1, .horizon = 10};
  const auto report = validate_monotone(up);
  EXPECT_FALSE(report.ok);
  ASSERT_TRUE(report.first_violation.has_value());
  EXPECT_EQ(*report.first_violation, 1u);
  EXPECT_FALSE(report.message.empty());
}

TEST(Scheduler, InvalidSpecs) {
  auto bad = clamped(5, 300);
  bad.c_min = 0.5;
  EXPECT_THROW(validate(bad), InvalidArgument);
  bad = clamped(5, 300);
  bad.c_max = 0.9;
  EXPECT_THROW(ratio_at(bad, 0), InvalidArgument);
  bad = clamped(5, 0);
  EXPECT_THROW(validate(bad), InvalidArgument);
  SchedulerSpec step{.kind = SchedulerKind::step, .step = -0.1};
  EXPECT_THROW(validate(step), InvalidArgument);
  SchedulerSpec ex{.kind = SchedulerKind::exponential, .base = 0.5};
  EXPECT_THROW(validate(ex), InvalidArgument);
  EXPECT_THROW(ratio_at(clamped(5, 10), 11), InvalidArgument);
  EXPECT_THROW(parse_scheduler_kind("cosine"), InvalidArgument);
  EXPECT_EQ(parse_scheduler_kind("clamped-linear"), SchedulerKind::clamped_linear);
}

}  // namespace
}  // namespace varco
