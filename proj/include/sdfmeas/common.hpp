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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdfmeas {

/// Simulated time, in processor clock cycles.
using Cycles = std::int64_t;

inline constexpr Cycles kNever = INT64_MAX;

/// Collects invariant violations instead of failing on the first one.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string message) { violations.push_back(std::move(message)); }
  void append(const ValidationReport& other, std::string_view prefix = {});
  bool mentions(std::string_view needle) const;
  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentGraph : public Error {
 public:
  using Error::Error;
};

class UnknownActor : public Error {
 public:
  using Error::Error;
};

class FiringNotEnabled : public Error {
 public:
  using Error::Error;
};

class NonPositiveCycles : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class NonPositiveShunt : public Error {
 public:
  using Error::Error;
};

class ControllerBusy : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class CycleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error("validation failed:\n" + report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Deadlock carries one human-readable line per blocked statement.
class DeadlockError : public Error {
 public:
  DeadlockError(Cycles cycle, std::vector<std::string> blocked);
  Cycles cycle() const { return cycle_; }
  const std::vector<std::string>& blocked() const { return blocked_; }

 private:
  Cycles cycle_;
  std::vector<std::string> blocked_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Mixes a base seed with stream indices (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace sdfmeas
