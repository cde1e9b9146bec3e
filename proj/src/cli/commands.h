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

#ifndef INFOLOAD_CLI_COMMANDS_H_
#define INFOLOAD_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace infoload::cli {

// Environment variables named kEnvPrefix + upper(key), with '.' mapped to
// '_', override config keys (INFOLOAD_BETA0, INFOLOAD_DELAY_BIN_0_MU1, ...).
inline constexpr const char* kEnvPrefix = "INFOLOAD_";

// One invocation; `args` excludes the program name. Returns the exit code:
// 0 on success, 1 on a runtime error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace infoload::cli

#endif  // INFOLOAD_CLI_COMMANDS_H_
