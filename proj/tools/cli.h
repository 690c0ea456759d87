// Copyright 2026 The Ritscan Authors
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

// The `ritscan` command-line tool as a library, so tests can drive it
// in-process.

#ifndef RITSCAN_TOOLS_CLI_H_
#define RITSCAN_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ritscan::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitFatal = 2;

// `args` excludes the program name. Reports go to `out`, diagnostics to
// `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct FlagDoc {
  std::string subcommand;
  std::string flag;  // "--format", or the name of a positional argument
  std::string description;
};

// Every option of every subcommand.
std::vector<FlagDoc> DescribeFlags();

}  // namespace ritscan::cli

#endif  // RITSCAN_TOOLS_CLI_H_
