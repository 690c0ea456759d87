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

#include "ritscan/rule_ir.h"

#include <set>

#include "absl/strings/str_cat.h"

namespace ritscan {

const char* TriggerKindName(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::kItemChanged:
      return "ItemChanged";
    case TriggerKind::kItemCommand:
      return "ItemCommand";
    case TriggerKind::kItemUpdate:
      return "ItemUpdate";
    case TriggerKind::kCron:
      return "Cron";
    case TriggerKind::kSystemStarted:
      return "SystemStarted";
    case TriggerKind::kStateComparison:
      return "StateComparison";
  }
  return "?";
}

const char* ActionKindName(ActionKind kind) {
  return kind == ActionKind::kSendCommand ? "sendCommand" : "postUpdate";
}

std::vector<Condition> Rule::AllConditions() const {
  std::vector<Condition> all = conditions;
  std::set<std::string> seen;
  for (const Condition& c : conditions) seen.insert(c.id);
  for (const GuardedAction& guarded : actions) {
    for (const Condition& c : guarded.guards) {
      if (seen.insert(c.id).second) all.push_back(c);
    }
  }
  return all;
}

bool Rule::HasConditions() const {
  if (!conditions.empty()) return true;
  for (const GuardedAction& guarded : actions) {
    if (!guarded.guards.empty()) return true;
  }
  return false;
}

int RuleSet::ErrorCount() const {
  int count = 0;
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::kError) ++count;
  }
  return count;
}

int RuleSet::WarningCount() const {
  return static_cast<int>(diagnostics.size()) - ErrorCount();
}

const Rule* RuleSet::FindRule(std::string_view id) const {
  for (const Rule& rule : rules) {
    if (rule.id == id) return &rule;
  }
  return nullptr;
}

std::string ActionSource(ActionKind kind, const std::string& item,
                         const Value& value, bool method_syntax) {
  if (method_syntax) {
    return absl::StrCat(item, ".", ActionKindName(kind), "(", value.ToSource(),
                        ")");
  }
  return absl::StrCat(ActionKindName(kind), "(", item, ", ", value.ToSource(),
                      ")");
}

std::string ComparisonSource(const std::string& item, CompareOp op,
                             const Value& value) {
  return absl::StrCat(item, " ", CompareOpText(op), " ", value.ToSource());
}

std::string TimeWindowSource(const TimeWindow& window) {
  return absl::StrCat("time >= ", FormatTimeOfDay(window.start_minute),
                      " && time <= ", FormatTimeOfDay(window.end_minute));
}

}  // namespace ritscan
