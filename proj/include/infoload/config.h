// Copyright 2026 The infoload Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOLOAD_CONFIG_H_
#define INFOLOAD_CONFIG_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoload {

// Flat `key = value` text. Blank lines and lines starting with '#' are
// ignored; keys are case-sensitive and may contain dots (delay_bin.0.mu1).
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in, std::string_view source_name);
  static KeyValueConfig load(const std::string& path);

  // For every key k already present or listed in `known`, an environment
  // variable PREFIX + upper(k) with '.' mapped to '_' replaces the value.
  void apply_env_overrides(std::string_view prefix,
                           const std::vector<std::string>& known = {});

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
  }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Keys that start with `prefix`, sorted.
  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Canonical text: sorted `key = value` lines.
  std::string to_string() const;

 private:
  std::map<std::string, std::string> values_;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

}  // namespace infoload

#endif  // INFOLOAD_CONFIG_H_
