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

// Small text helpers shared by the file readers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varco {

// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view line);

std::string_view trim(std::string_view s);

// Splits on any character in `delims`, dropping empty fields.
std::vector<std::string_view> split_fields(std::string_view s, std::string_view delims);

std::optional<std::uint64_t> parse_uint(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// Shortest representation that round-trips exactly.
std::string format_double(double v);

}  // namespace varco
