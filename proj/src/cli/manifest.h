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

#ifndef INFOLOAD_CLI_MANIFEST_H_
#define INFOLOAD_CLI_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoload::cli {

struct InputDigest {
  std::string path;
  std::uint64_t bytes = 0;
  std::string sha256;
};

// Lowercase hex SHA-256 of a file. Throws InputError when unreadable.
InputDigest digest_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::string tool_version;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::map<std::string, std::string> config;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

// Writes to a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

}  // namespace infoload::cli

#endif  // INFOLOAD_CLI_MANIFEST_H_
