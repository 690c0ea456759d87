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

// Normalized intermediate representation of a rules file. All analysis runs
// over these types; none of them refer back to tokens.

#ifndef RITSCAN_RULE_IR_H_
#define RITSCAN_RULE_IR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ritscan/source.h"
#include "ritscan/value.h"

namespace ritscan {

enum class TriggerKind {
  kItemChanged,
  kItemCommand,
  kItemUpdate,
  kCron,
  kSystemStarted,
  kStateComparison,
};

const char* TriggerKindName(TriggerKind kind);

struct Comparison {
  CompareOp op = CompareOp::kEq;
  Value value;

  bool operator==(const Comparison&) const = default;
};

// Which optional fields are set depends on `kind`:
//   kItemChanged      item, from_value?, to_value?
//   kItemCommand      item, command_value?
//   kItemUpdate       item
//   kCron             cron
//   kSystemStarted    -
//   kStateComparison  item, comparison
struct Trigger {
  std::string id;  // rNtM
  TriggerKind kind = TriggerKind::kSystemStarted;
  std::string item;
  std::optional<Value> from_value;
  std::optional<Value> to_value;
  std::optional<Value> command_value;
  std::string cron;
  std::optional<Comparison> comparison;
  std::string text;  // whitespace-normalized source text
  SourceSpan span;

  bool operator==(const Trigger&) const = default;
};

enum class ConditionKind { kItemComparison, kTimeWindow };

struct Condition {
  std::string id;  // rNcM
  ConditionKind kind = ConditionKind::kItemComparison;
  std::string item;
  CompareOp op = CompareOp::kEq;
  Value value;
  std::optional<TimeWindow> window;
  std::string text;  // source text of the comparison(s), without `if`
  SourceSpan span;

  bool operator==(const Condition&) const = default;
};

enum class ActionKind { kSendCommand, kPostUpdate };

const char* ActionKindName(ActionKind kind);

struct Action {
  std::string id;  // rNaM
  ActionKind kind = ActionKind::kSendCommand;
  std::string item;
  Value value;
  // `Item.sendCommand(V)` rather than `sendCommand(Item, V)`.
  bool method_syntax = false;
  std::string text;
  SourceSpan span;

  bool operator==(const Action&) const = default;
};

// An action and the conjunction of every condition that dominates it,
// including the rule-level conditions from the `when` clause.
struct GuardedAction {
  Action action;
  std::vector<Condition> guards;

  bool operator==(const GuardedAction&) const = default;
};

struct Rule {
  std::string id;  // rN
  std::string name;
  std::vector<Trigger> triggers;
  // `&&` comparisons found in the `when` clause.
  std::vector<Condition> conditions;
  std::vector<GuardedAction> actions;

  SourceSpan span;            // `rule` .. `end`
  SourceSpan trigger_clause;  // between `when` and `then`
  SourceSpan end_keyword;

  // Rule-level conditions and every action guard, each condition once, in id
  // order.
  std::vector<Condition> AllConditions() const;
  bool HasConditions() const;

  bool operator==(const Rule&) const = default;
};

struct RuleSet {
  std::string file_id;
  std::vector<Rule> rules;
  std::vector<Diagnostic> diagnostics;

  int ErrorCount() const;
  int WarningCount() const;
  const Rule* FindRule(std::string_view id) const;

  bool operator==(const RuleSet&) const = default;
};

// Rule-source spellings used by the reporter and the mutator.
std::string ActionSource(ActionKind kind, const std::string& item,
                         const Value& value, bool method_syntax);
std::string ComparisonSource(const std::string& item, CompareOp op,
                             const Value& value);
std::string TimeWindowSource(const TimeWindow& window);

}  // namespace ritscan

#endif  // RITSCAN_RULE_IR_H_
