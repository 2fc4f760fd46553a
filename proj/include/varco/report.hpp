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

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varco/metrics.hpp"

namespace varco {

// One training run tagged with its arm. Runs sharing an arm are averaged.
struct RunCurve {
  std::string arm;
  std::vector<MetricsRecord> rows;
};

// "arm=path" uses the given arm; otherwise the arm is the parent directory
// name for files called metrics.csv and the file stem for anything else.
RunCurve load_run(std::string_view spec);

struct ArmSummary {
  std::string arm;
  std::size_t runs = 0;
  double final_test_mean = 0.0;
  double final_test_std = 0.0;
  double final_val_mean = 0.0;
  double total_floats_mean = 0.0;
};

std::vector<ArmSummary> summarize(std::span<const RunCurve> runs);

// Test accuracy of the last epoch whose cumulative floats fit in `budget`,
// NaN when even the first epoch exceeds it.
double accuracy_at_budget(std::span<const MetricsRecord> rows, double budget);

// Evenly spaced budgets between the largest first-epoch total and the
// smallest final total over runs that communicate at all. A single run yields
// its own cumulative column.
std::vector<double> budget_grid(std::span<const RunCurve> runs, std::size_t points);

struct BudgetCurve {
  std::vector<double> budgets;
  std::vector<std::string> arms;
  // accuracy[a][i]: mean over the arm's runs at budgets[i].
  std::vector<std::vector<double>> accuracy;
};

BudgetCurve budget_curve(std::span<const RunCurve> runs, std::size_t points);

struct Dominance {
  std::string arm;
  std::string other;
  std::size_t wins = 0;
  std::size_t total = 0;
  double fraction() const { return total == 0 ? 1.0 : static_cast<double>(wins) / total; }
};

// Grid points where `arm` is at least as accurate as `other`. A NaN entry
// (budget below the first epoch) loses to any number.
Dominance dominance(const BudgetCurve& curve, std::string_view arm, std::string_view other);

// Final-accuracy table, budget curve and, when `lead` is among the arms, its
// dominance over every other communicating arm.
void write_report(std::span<const RunCurve> runs, std::size_t points, std::string_view lead,
                  std::ostream& out);

}  // namespace varco
