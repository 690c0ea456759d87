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

#include "ritscan/semantics.h"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"

namespace ritscan {
namespace {

// Trigger equality on meaning only: ids, spellings and spans are ignored.
bool SameEvent(const Trigger& a, const Trigger& b) {
  if (a.kind != b.kind || a.item != b.item) return false;
  auto same = [](const std::optional<Value>& x, const std::optional<Value>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x.has_value() || x->Equivalent(*y);
  };
  switch (a.kind) {
    case TriggerKind::kItemChanged:
      return same(a.from_value, b.from_value) && same(a.to_value, b.to_value);
    case TriggerKind::kItemCommand:
      return same(a.command_value, b.command_value);
    case TriggerKind::kItemUpdate:
    case TriggerKind::kSystemStarted:
      return true;
    case TriggerKind::kCron:
      return a.cron == b.cron;
    case TriggerKind::kStateComparison:
      return a.comparison->op == b.comparison->op &&
             a.comparison->value.Equivalent(b.comparison->value);
  }
  return false;
}

Condition AsCondition(const std::string& item, const Comparison& comparison) {
  Condition c;
  c.kind = ConditionKind::kItemComparison;
  c.item = item;
  c.op = comparison.op;
  c.value = comparison.value;
  return c;
}

struct Bound {
  Decimal value;
  bool strict = false;
};

bool ItemSatisfiable(const std::vector<const Condition*>& conditions) {
  bool ordered = false;
  for (const Condition* c : conditions) {
    if (c->op == CompareOp::kEq || c->op == CompareOp::kNe) continue;
    if (c->value.kind() != Value::Kind::kNumber) return false;
    ordered = true;
  }

  std::optional<Value> pinned;
  for (const Condition* c : conditions) {
    if (c->op != CompareOp::kEq) continue;
    if (pinned && !pinned->Equivalent(c->value)) return false;
    pinned = c->value;
  }
  if (pinned) {
    for (const Condition* c : conditions) {
      if (!EvaluateComparison(*pinned, c->op, c->value)) return false;
    }
    return true;
  }
  if (!ordered) return true;  // only != constraints

  std::optional<Bound> lo;
  std::optional<Bound> hi;
  for (const Condition* c : conditions) {
    if (c->op == CompareOp::kEq || c->op == CompareOp::kNe) continue;
    Bound b{*c->value.number(), c->op == CompareOp::kGt || c->op == CompareOp::kLt};
    if (c->op == CompareOp::kGt || c->op == CompareOp::kGe) {
      if (!lo || b.value > lo->value || (b.value == lo->value && b.strict)) {
        lo = b;
      }
    } else {
      if (!hi || b.value < hi->value || (b.value == hi->value && b.strict)) {
        hi = b;
      }
    }
  }
  if (lo && hi) {
    if (lo->value > hi->value) return false;
    if (lo->value == hi->value) {
      if (lo->strict || hi->strict) return false;
      // A single admissible point: it must not be excluded.
      Value point = Value::Number(lo->value);
      for (const Condition* c : conditions) {
        if (c->op == CompareOp::kNe && c->value.Equivalent(point)) return false;
      }
    }
  }
  // A nonempty interval with more than one point contains infinitely many
  // rationals, so finitely many != constraints cannot empty it.
  return true;
}

}  // namespace

const char* OverlapReasonName(OverlapReason reason) {
  switch (reason) {
    case OverlapReason::kSameEvent:
      return "same-event";
    case OverlapReason::kConservativeDefault:
      return "conservative-default";
    case OverlapReason::kProvenDisjointCron:
      return "proven-disjoint-cron";
    case OverlapReason::kProvenDisjointState:
      return "proven-disjoint-state";
    case OverlapReason::kProvenDisjointTimeWindow:
      return "proven-disjoint-timewindow";
  }
  return "?";
}

std::optional<CronInstant> FixedCronInstant(const std::string& cron) {
  std::vector<std::string> fields =
      absl::StrSplit(cron, ' ', absl::SkipWhitespace());
  if (fields.size() < 5) return std::nullopt;
  size_t minute_field = fields.size() == 5 ? 0 : 1;
  auto fixed = [](const std::string& field, int limit) -> std::optional<int> {
    if (field.empty() || !std::all_of(field.begin(), field.end(), ::isdigit)) {
      return std::nullopt;
    }
    int value = 0;
    if (!absl::SimpleAtoi(field, &value) || value >= limit) return std::nullopt;
    return value;
  };
  auto minute = fixed(fields[minute_field], 60);
  auto hour = fixed(fields[minute_field + 1], 24);
  if (!minute || !hour) return std::nullopt;
  return CronInstant{*hour, *minute};
}

OverlapVerdict TriggersOverlap(const Trigger& a, const Trigger& b) {
  if (SameEvent(a, b)) return {true, OverlapReason::kSameEvent};
  if (a.kind == TriggerKind::kCron && b.kind == TriggerKind::kCron) {
    auto x = FixedCronInstant(a.cron);
    auto y = FixedCronInstant(b.cron);
    if (x && y && !(*x == *y)) {
      return {false, OverlapReason::kProvenDisjointCron};
    }
  }
  if (a.kind == TriggerKind::kItemChanged &&
      b.kind == TriggerKind::kItemChanged && a.item == b.item &&
      a.to_value && b.to_value && !a.to_value->Equivalent(*b.to_value)) {
    return {false, OverlapReason::kProvenDisjointState};
  }
  if (a.kind == TriggerKind::kStateComparison &&
      b.kind == TriggerKind::kStateComparison && a.item == b.item &&
      !Satisfiable({AsCondition(a.item, *a.comparison),
                    AsCondition(b.item, *b.comparison)})) {
    return {false, OverlapReason::kProvenDisjointState};
  }
  return {true, OverlapReason::kConservativeDefault};
}

bool Satisfiable(const std::vector<Condition>& conditions) {
  std::map<std::string, std::vector<const Condition*>> by_item;
  TimeWindow window;
  for (const Condition& c : conditions) {
    if (c.kind == ConditionKind::kTimeWindow) {
      window.start_minute = std::max(window.start_minute, c.window->start_minute);
      window.end_minute = std::min(window.end_minute, c.window->end_minute);
      continue;
    }
    by_item[c.item].push_back(&c);
  }
  if (window.start_minute > window.end_minute) return false;
  for (const auto& [item, group] : by_item) {
    if (!ItemSatisfiable(group)) return false;
  }
  return true;
}

bool ConditionsOverlap(const std::vector<Condition>& a,
                       const std::vector<Condition>& b) {
  std::vector<Condition> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return Satisfiable(all);
}

bool ValueConflicts(const Value& a, const Value& b) { return !a.Equivalent(b); }

bool ActionsContradict(const Action& a, const Action& b) {
  return a.item == b.item && ValueConflicts(a.value, b.value);
}

bool ActionMatchesTrigger(const Action& a, const Trigger& t, bool strict) {
  if (a.item != t.item) return false;
  switch (t.kind) {
    case TriggerKind::kItemUpdate:
      return true;
    case TriggerKind::kItemChanged:
      return !t.to_value || t.to_value->Equivalent(a.value);
    case TriggerKind::kItemCommand:
      if (a.kind == ActionKind::kPostUpdate && strict) return false;
      return !t.command_value || t.command_value->Equivalent(a.value);
    default:
      return false;
  }
}

bool ActionEnablesCondition(const Action& a, const Condition& c) {
  return c.kind == ConditionKind::kItemComparison && c.item == a.item &&
         EvaluateComparison(a.value, c.op, c.value);
}

}  // namespace ritscan
