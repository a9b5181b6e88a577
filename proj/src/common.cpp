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

#include "sdfmeas/common.hpp"

#include <charconv>
#include <sstream>

namespace sdfmeas {

void ValidationReport::append(const ValidationReport& other, std::string_view prefix) {
  for (const auto& v : other.violations) {
    violations.push_back(std::string(prefix) + v);
  }
}

bool ValidationReport::mentions(std::string_view needle) const {
  for (const auto& v : violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << "  - " << v << '\n';
  return os.str();
}

namespace {
std::string describe_deadlock(Cycles cycle, const std::vector<std::string>& blocked) {
  std::ostringstream os;
  os << "deadlock at cycle " << cycle << "; blocked statements:";
  for (const auto& b : blocked) os << "\n  " << b;
  return os.str();
}
}  // namespace

DeadlockError::DeadlockError(Cycles cycle, std::vector<std::string> blocked)
    : Error(describe_deadlock(cycle, blocked)), cycle_(cycle), blocked_(std::move(blocked)) {}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

}  // namespace sdfmeas
