/*
 * Copyright 2026 The sdfmeas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Minimal unquoted CSV used by the fixed schemas. Fields never contain commas.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sdfmeas::csv {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, per row
};

std::vector<std::string> split(std::string_view line);

/// Reads a table whose header must equal `expected` exactly; throws
/// SchemaError naming the first offending column.
Table read(std::istream& is, const std::vector<std::string>& expected);

std::int64_t to_int(const Table& t, std::size_t row, std::size_t col);
double to_double(const Table& t, std::size_t row, std::size_t col);
/// True for the "n/a" marker.
bool is_na(const Table& t, std::size_t row, std::size_t col);

}  // namespace sdfmeas::csv
