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

#include "infoload/config.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "infoload/error.h"

namespace infoload {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string env_name(std::string_view prefix, std::string_view key) {
  std::string out(prefix);
  for (char c : key) {
    out.push_back(c == '.' ? '_'
                           : static_cast<char>(std::toupper(
                                 static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InputError(std::string(what) + ": not a number: '" +
                     std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InputError(std::string(what) + ": not an integer: '" +
                     std::string(text) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InputError(std::string(what) + ": not an unsigned integer: '" +
                     std::string(text) + "'");
  return v;
}

KeyValueConfig KeyValueConfig::parse(std::istream& in,
                                     std::string_view source_name) {
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw InputError(std::string(source_name) + ":" +
                       std::to_string(lineno) + ": expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    if (key.empty())
      throw InputError(std::string(source_name) + ":" +
                       std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw InputError(std::string(source_name) + ":" +
                       std::to_string(lineno) + ": duplicate key '" + key +
                       "'");
    cfg.values_[key] = std::string(trim(s.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  return parse(in, path);
}

void KeyValueConfig::apply_env_overrides(std::string_view prefix,
                                         const std::vector<std::string>& known) {
  std::vector<std::string> keys = known;
  for (const auto& [k, v] : values_) keys.push_back(k);
  for (const auto& k : keys) {
    if (const char* env = std::getenv(env_name(prefix, k).c_str()))
      values_[k] = env;
  }
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) throw InputError("missing config key: " + key);
  return parse_double(*v, key);
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  auto v = get(key);
  if (!v) throw InputError("missing config key: " + key);
  return parse_int(*v, key);
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
  auto v = get(key);
  return v ? parse_int(*v, key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  auto v = get(key);
  return v ? parse_u64(*v, key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw InputError(key + ": not a boolean: '" + *v + "'");
}

std::vector<std::string> KeyValueConfig::keys_with_prefix(
    std::string_view prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (std::string_view(k).substr(0, prefix.size()) == prefix)
      out.push_back(k);
  return out;
}

std::string KeyValueConfig::to_string() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace infoload
