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

#include "varco/metrics.hpp"

#include <fstream>

#include "varco/error.hpp"
#include "varco/text.hpp"

namespace varco {

std::string format_metrics_row(const MetricsRecord& m) {
  std::string s;
  s += std::to_string(m.epoch);
  s += ',' + format_double(m.ratio);
  s += ',' + format_double(m.train_loss);
  s += ',' + format_double(m.val_acc);
  s += ',' + format_double(m.test_acc);
  s += ',' + std::to_string(m.fwd_floats);
  s += ',' + std::to_string(m.bwd_floats);
  s += ',' + std::to_string(m.param_floats);
  s += ',' + std::to_string(m.cum_floats);
  return s;
}

void write_metrics_csv(std::span<const MetricsRecord> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << kMetricsHeader << '\n';
  for (const auto& m : rows) out << format_metrics_row(m) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != kMetricsHeader) {
    throw ParseError(path.string(), 1, "unexpected header, expected \"" +
                                           std::string(kMetricsHeader) + "\"");
  }
  std::vector<MetricsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_fields(line, ",");
    if (f.size() != 9) throw ParseError(path.string(), lineno, "expected 9 columns");
    MetricsRecord m;
    const auto epoch = parse_uint(f[0]);
    const auto ratio = parse_double(f[1]);
    const auto loss = parse_double(f[2]);
    const auto val = parse_double(f[3]);
    const auto test = parse_double(f[4]);
    const auto fwd = parse_uint(f[5]);
    const auto bwd = parse_uint(f[6]);
    const auto param = parse_uint(f[7]);
    const auto cum = parse_uint(f[8]);
    if (!epoch || !ratio || !loss || !val || !test || !fwd || !bwd || !param || !cum) {
      throw ParseError(path.string(), lineno, "malformed metrics row");
    }
    m.epoch = static_cast<std::uint32_t>(*epoch);
    m.ratio = *ratio;
    m.train_loss = *loss;
    m.val_acc = *val;
    m.test_acc = *test;
    m.fwd_floats = *fwd;
    m.bwd_floats = *bwd;
    m.param_floats = *param;
    m.cum_floats = *cum;
    rows.push_back(m);
  }
  return rows;
}

}  // namespace varco
