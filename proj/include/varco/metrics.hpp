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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace varco {

// One row of the training metrics CSV.
struct MetricsRecord {
  std::uint32_t epoch = 0;
  double ratio = 1.0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  std::uint64_t fwd_floats = 0;
  std::uint64_t bwd_floats = 0;
  std::uint64_t param_floats = 0;
  // Running total of activation traffic (forward + backward halo floats).
  // Parameter traffic is reported per epoch in param_floats only.
  std::uint64_t cum_floats = 0;

  bool operator==(const MetricsRecord&) const = default;
};

inline constexpr const char* kMetricsHeader =
    "epoch,ratio,train_loss,val_acc,test_acc,fwd_floats,bwd_floats,param_floats,cum_floats";

std::string format_metrics_row(const MetricsRecord& m);
void write_metrics_csv(std::span<const MetricsRecord> rows, const std::filesystem::path& path);
// Throws ParseError on a header other than kMetricsHeader or malformed rows.
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

}  // namespace varco
