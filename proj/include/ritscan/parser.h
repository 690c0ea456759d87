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

// Parser for the subset of the openHAB rule DSL used by the analyzer.
//
// Supported triggers (keywords case-insensitive, `Item` optional):
//   Item X changed [from V] [to V]      Item X received command [V]
//   Item X received update              Time cron "<expr>"
//   System started                      X.state <op> V
// joined by `or`. `&&` comparisons after a trigger become rule-level
// conditions. Scripts may contain sendCommand/postUpdate in both call forms
// and `if` statements whose conditions are `&&`-joined comparisons, including
// `time <op> HH:MM` windows. An `if` without braces guards every following
// line that is indented deeper than the `if` line.
//
// Anything else in a script is skipped with a warning; a rule whose header or
// trigger clause cannot be parsed is skipped with an error.

#ifndef RITSCAN_PARSER_H_
#define RITSCAN_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ritscan/rule_ir.h"
#include "ritscan/source.h"

namespace ritscan {

RuleSet ParseRuleSet(const SourceFile& source);

struct TriggerClause {
  std::vector<Trigger> triggers;
  std::vector<Condition> conditions;
};

// Parses the text between `when` and `then` as part of a rule with id
// `rule_id`. Errors carry the message of the would-be diagnostic.
absl::StatusOr<TriggerClause> ParseTriggerClause(std::string_view text,
                                                 std::string_view rule_id = "r1");

struct ScriptBlock {
  std::vector<GuardedAction> actions;
  std::vector<Diagnostic> diagnostics;
};

// Parses the text between `then` and `end`.
ScriptBlock ParseScriptBlock(std::string_view text,
                             std::string_view rule_id = "r1");

}  // namespace ritscan

#endif  // RITSCAN_PARSER_H_
