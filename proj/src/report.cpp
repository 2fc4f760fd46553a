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

#include "varco/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "varco/error.hpp"
#include "varco/text.hpp"

namespace varco {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool communicates(const RunCurve& r) { return !r.rows.empty() && r.rows.back().cum_floats > 0; }

std::vector<std::string> arm_order(std::span<const RunCurve> runs) {
  std::vector<std::string> arms;
  for (const auto& r : runs) {
    if (std::find(arms.begin(), arms.end(), r.arm) == arms.end()) arms.push_back(r.arm);
  }
  return arms;
}

std::string cell(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace

RunCurve load_run(std::string_view spec) {
  RunCurve run;
  std::filesystem::path path;
  if (const auto eq = spec.find('='); eq != std::string_view::npos) {
    run.arm = std::string(spec.substr(0, eq));
    path = std::string(spec.substr(eq + 1));
  } else {
    path = std::string(spec);
    run.arm = path.filename() == "metrics.csv" && path.has_parent_path()
                  ? path.parent_path().filename().string()
                  : path.stem().string();
  }
  if (run.arm.empty()) throw InvalidArgument("empty arm name in \"" + std::string(spec) + "\"");
  run.rows = read_metrics_csv(path);
  if (run.rows.empty()) throw ParseError(path.string(), 1, "no metrics rows");
  return run;
}

std::vector<ArmSummary> summarize(std::span<const RunCurve> runs) {
  std::vector<ArmSummary> out;
  for (const auto& arm : arm_order(runs)) {
    ArmSummary s;
    s.arm = arm;
    std::vector<double> tests;
    for (const auto& r : runs) {
      if (r.arm != arm || r.rows.empty()) continue;
      ++s.runs;
      tests.push_back(r.rows.back().test_acc);
      s.final_val_mean += r.rows.back().val_acc;
      s.total_floats_mean += static_cast<double>(r.rows.back().cum_floats);
    }
    if (s.runs == 0) continue;
    const double n = static_cast<double>(s.runs);
    for (double v : tests) s.final_test_mean += v;
    s.final_test_mean /= n;
    s.final_val_mean /= n;
    s.total_floats_mean /= n;
    if (s.runs > 1) {
      double ss = 0.0;
      for (double v : tests) ss += (v - s.final_test_mean) * (v - s.final_test_mean);
      s.final_test_std = std::sqrt(ss / (n - 1.0));
    }
    out.push_back(s);
  }
  return out;
}

double accuracy_at_budget(std::span<const MetricsRecord> rows, double budget) {
  double acc = kNaN;
  for (const auto& r : rows) {
    if (static_cast<double>(r.cum_floats) > budget) break;
    acc = r.test_acc;
  }
  return acc;
}

std::vector<double> budget_grid(std::span<const RunCurve> runs, std::size_t points) {
  if (runs.size() == 1) {
    std::vector<double> own;
    for (const auto& r : runs.front().rows) {
      const double c = static_cast<double>(r.cum_floats);
      if (own.empty() || c != own.back()) own.push_back(c);
    }
    return own;
  }
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& r : runs) {
    if (!communicates(r)) continue;
    any = true;
    lo = std::max(lo, static_cast<double>(r.rows.front().cum_floats));
    hi = std::min(hi, static_cast<double>(r.rows.back().cum_floats));
  }
  if (!any || points == 0) return {};
  if (hi < lo) hi = lo;
  if (points == 1 || hi == lo) return {hi};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = hi;
  return grid;
}

BudgetCurve budget_curve(std::span<const RunCurve> runs, std::size_t points) {
  BudgetCurve c;
  c.budgets = budget_grid(runs, points);
  c.arms = arm_order(runs);
  for (const auto& arm : c.arms) {
    std::vector<double> acc(c.budgets.size(), 0.0);
    std::size_t n = 0;
    for (const auto& r : runs) {
      if (r.arm != arm) continue;
      ++n;
      for (std::size_t i = 0; i < c.budgets.size(); ++i) {
        acc[i] += accuracy_at_budget(r.rows, c.budgets[i]);
      }
    }
    for (auto& v : acc) v /= static_cast<double>(n);
    c.accuracy.push_back(std::move(acc));
  }
  return c;
}

Dominance dominance(const BudgetCurve& curve, std::string_view arm, std::string_view other) {
  auto index = [&](std::string_view name) {
    const auto it = std::find(curve.arms.begin(), curve.arms.end(), name);
    if (it == curve.arms.end()) throw InvalidArgument("no arm \"" + std::string(name) + "\"");
    return static_cast<std::size_t>(it - curve.arms.begin());
  };
  const auto& a = curve.accuracy[index(arm)];
  const auto& b = curve.accuracy[index(other)];
  Dominance d{std::string(arm), std::string(other), 0, curve.budgets.size()};
  for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
    if (std::isnan(b[i]) || (!std::isnan(a[i]) && a[i] >= b[i])) ++d.wins;
  }
  return d;
}

void write_report(std::span<const RunCurve> runs, std::size_t points, std::string_view lead,
                  std::ostream& out) {
  if (runs.empty()) throw InvalidArgument("report needs at least one metrics file");
  out << "# final accuracy\n";
  out << "arm,runs,test_acc_mean,test_acc_std,val_acc_mean,cum_floats_mean\n";
  for (const auto& s : summarize(runs)) {
    out << s.arm << ',' << s.runs << ',' << format_double(s.final_test_mean) << ','
        << format_double(s.final_test_std) << ',' << format_double(s.final_val_mean) << ','
        << format_double(s.total_floats_mean) << '\n';
  }

  const BudgetCurve curve = budget_curve(runs, points);
  out << "# test accuracy by cumulative floats\n";
  out << "budget";
  for (const auto& a : curve.arms) out << ',' << a;
  out << '\n';
  for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
    out << format_double(curve.budgets[i]);
    for (const auto& acc : curve.accuracy) out << ',' << cell(acc[i]);
    out << '\n';
  }

  if (std::find(curve.arms.begin(), curve.arms.end(), lead) == curve.arms.end()) return;
  std::set<std::string> silent;
  for (const auto& arm : curve.arms) {
    bool any = false;
    for (const auto& r : runs) any = any || (r.arm == arm && communicates(r));
    if (!any) silent.insert(arm);
  }
  out << "# dominance\n";
  for (const auto& other : curve.arms) {
    if (other == lead || silent.count(other) != 0) continue;
    const Dominance d = dominance(curve, lead, other);
    out << d.arm << ">=" << d.other << ',' << d.wins << '/' << d.total << ','
        << format_double(d.fraction()) << ',' << (d.wins == d.total ? "ok" : "flagged") << '\n';
  }
}

}  // namespace varco
