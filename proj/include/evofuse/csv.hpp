// Copyright 2026 The evofuse Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evofuse::io {

/// A text line with its 1-based line number in the source file.
struct Line {
  std::size_t number;
  std::string text;
};

/// Reads a UTF-8 text file, accepting LF and CRLF; blank lines are dropped.
/// Throws DataError if the file cannot be opened.
std::vector<Line> read_lines(const std::filesystem::path& path);

/// Splits one CSV record. Double-quoted fields may contain commas and `""` escapes.
std::vector<std::string> split_csv(std::string_view line);

/// Splits on runs of spaces/tabs.
std::vector<std::string> split_ws(std::string_view line);

std::string csv_quote(std::string_view field);

std::optional<double> parse_real(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

/// Shortest-roundtrip decimal (max_digits10) with `.` as separator.
std::string format_exact(double value);

/// printf-style `%.<digits>g`.
std::string format_sig(double value, int digits);

/// Human-readable parameter count: 95M, 1.00B, 18.6B (3 significant digits).
std::string format_params(std::int64_t params);

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string trim(std::string_view s);

}  // namespace evofuse::io
