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

#include "csv.hpp"

#include <charconv>
#include <istream>

#include "sdfmeas/common.hpp"

namespace sdfmeas::csv {

std::vector<std::string> split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Table read(std::istream& is, const std::vector<std::string>& expected) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("empty input: missing header");
  t.columns = split(line);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= t.columns.size()) throw SchemaError("missing column '" + expected[i] + "'");
    if (t.columns[i] != expected[i]) {
      throw SchemaError("unexpected column '" + t.columns[i] + "' at position " + std::to_string(i + 1) +
                        ", expected '" + expected[i] + "'");
    }
  }
  if (t.columns.size() > expected.size()) {
    throw SchemaError("unexpected column '" + t.columns[expected.size()] + "'");
  }
  std::size_t number = 1;
  while (std::getline(is, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    auto fields = split(line);
    if (fields.size() != expected.size()) {
      throw SchemaError("line " + std::to_string(number) + ": expected " + std::to_string(expected.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(number);
  }
  return t;
}

namespace {

[[noreturn]] void bad_field(const Table& t, std::size_t row, std::size_t col, const char* what) {
  throw SchemaError("line " + std::to_string(t.line_numbers[row]) + ", column '" + t.columns[col] +
                    "': " + what + " '" + t.rows[row][col] + "'");
}

template <typename T>
T parse(const Table& t, std::size_t row, std::size_t col, const char* what) {
  const auto& s = t.rows[row][col];
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) bad_field(t, row, col, what);
  return value;
}

}  // namespace

std::int64_t to_int(const Table& t, std::size_t row, std::size_t col) {
  return parse<std::int64_t>(t, row, col, "not an integer");
}

double to_double(const Table& t, std::size_t row, std::size_t col) {
  return parse<double>(t, row, col, "not a number");
}

bool is_na(const Table& t, std::size_t row, std::size_t col) { return t.rows[row][col] == "n/a"; }

}  // namespace sdfmeas::csv
