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

#include "ritscan/detector.h"

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "ritscan/semantics.h"

namespace ritscan {
namespace {

constexpr const char* kContradictionText =
    "IF OVERLAPPING SETS OF TRIGGERS AND CONDITIONS ARE CONCURRENTLY ACTIVATED\n"
    "CONTRADICTORY ACTION EXECUTION COULD OCCUR IN ANY ORDER\n"
    "WHICH MAY RESULT IN AN INDETERMINATE DEVICE STATE.";
constexpr const char* kCascadeText =
    "IF THE CASCADING ACTION IS EXECUTED\n"
    "THE TRIGGER OF THE SECOND RULE FIRES AS A SIDE EFFECT\n"
    "WHICH MAY START A CHAIN OF DEVICE ACTIONS NOBODY ASKED FOR.";
constexpr const char* kConditionCascadeText =
    "IF OVERLAPPING SETS OF TRIGGERS ARE CONCURRENTLY ACTIVATED\n"
    "THE ENABLING ACTION MAY SATISFY GUARDS OF THE SECOND RULE\n"
    "WHICH MAY RELEASE AN ACTION THOSE GUARDS WERE MEANT TO HOLD BACK.";

std::vector<Evidence> ConditionEvidence(const std::vector<Condition>& conds) {
  std::vector<Evidence> out;
  for (const Condition& c : conds) out.push_back({c.id, c.text});
  return out;
}

Evidence TriggerEvidence(const Trigger& t) { return {t.id, t.text}; }
Evidence ActionEvidence(const Action& a) { return {a.id, a.text}; }

// Overlapping trigger pairs and the distinct triggers on each side.
struct TriggerOverlap {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<Evidence> a;
  std::vector<Evidence> b;
};

TriggerOverlap OverlappingTriggers(const Rule& a, const Rule& b) {
  TriggerOverlap out;
  std::set<std::string> used_b;
  for (const Trigger& ta : a.triggers) {
    bool any = false;
    for (const Trigger& tb : b.triggers) {
      if (!TriggersOverlap(ta, tb).overlap) continue;
      out.pairs.emplace_back(ta.id, tb.id);
      used_b.insert(tb.id);
      any = true;
    }
    if (any) out.a.push_back(TriggerEvidence(ta));
  }
  for (const Trigger& tb : b.triggers) {
    if (used_b.count(tb.id)) out.b.push_back(TriggerEvidence(tb));
  }
  return out;
}

Finding NewFinding(ThreatCategory category, const Rule& a, const Rule& b,
                   const Action& x) {
  Finding f;
  f.category = category;
  f.rule_a = {a.id, a.name};
  f.rule_b = {b.id, b.name};
  f.source_id = x.id;
  f.action_a = ActionEvidence(x);
  f.description = ThreatDescription(Aggregate(category));
  return f;
}

std::vector<std::string> Ids(const std::vector<Condition>& conds) {
  std::vector<std::string> ids;
  for (const Condition& c : conds) ids.push_back(c.id);
  return ids;
}

// The guards of `y` enabled by `x`, or empty when no condition cascade
// exists between the two rules at all.
std::vector<Condition> Enabled(const Action& x, const GuardedAction& y) {
  std::vector<Condition> enabled;
  for (const Condition& c : y.guards) {
    if (ActionEnablesCondition(x, c)) enabled.push_back(c);
  }
  return enabled;
}

bool ConditionCascadePossible(const Rule& a, const Rule& b,
                              const TriggerOverlap& overlap) {
  return a.HasConditions() && b.HasConditions() && !overlap.pairs.empty();
}

// Action-id pairs (x of a, y of b) joined by a condition cascade in either
// direction.
std::set<std::pair<std::string, std::string>> CascadeLinkedActions(
    const Rule& a, const Rule& b, const TriggerOverlap& overlap) {
  std::set<std::pair<std::string, std::string>> linked;
  if (!ConditionCascadePossible(a, b, overlap)) return linked;
  for (const GuardedAction& x : a.actions) {
    for (const GuardedAction& y : b.actions) {
      if (!Enabled(x.action, y).empty() || !Enabled(y.action, x).empty()) {
        linked.emplace(x.action.id, y.action.id);
      }
    }
  }
  return linked;
}

std::vector<Finding> ActionContradictions(
    const Rule& a, const Rule& b, const TriggerOverlap& overlap,
    const std::set<std::pair<std::string, std::string>>& excluded) {
  std::vector<Finding> out;
  if (overlap.pairs.empty()) return out;
  for (const GuardedAction& x : a.actions) {
    for (const GuardedAction& y : b.actions) {
      if (!ActionsContradict(x.action, y.action)) continue;
      if (!ConditionsOverlap(x.guards, y.guards)) continue;
      if (excluded.count({x.action.id, y.action.id})) continue;
      bool strong = x.guards.empty() && y.guards.empty();
      Finding f = NewFinding(strong ? ThreatCategory::kSAC : ThreatCategory::kWAC,
                             a, b, x.action);
      f.target_ids = {y.action.id};
      f.trigger_pairs = overlap.pairs;
      f.triggers_a = overlap.a;
      f.triggers_b = overlap.b;
      f.conditions_a = ConditionEvidence(x.guards);
      f.conditions_b = ConditionEvidence(y.guards);
      f.targets_b = {ActionEvidence(y.action)};
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Finding> ConditionCascades(const Rule& a, const Rule& b,
                                       const TriggerOverlap& overlap) {
  std::vector<Finding> out;
  if (!ConditionCascadePossible(a, b, overlap)) return out;
  for (const GuardedAction& x : a.actions) {
    std::set<std::vector<std::string>> seen;
    for (const GuardedAction& y : b.actions) {
      std::vector<Condition> enabled = Enabled(x.action, y);
      if (enabled.empty()) continue;
      std::vector<std::string> guard_ids = Ids(y.guards);
      if (!seen.insert(guard_ids).second) continue;
      bool strong = enabled.size() == y.guards.size();
      Finding f = NewFinding(strong ? ThreatCategory::kSCC : ThreatCategory::kWCC,
                             a, b, x.action);
      f.target_ids = guard_ids;
      f.trigger_pairs = overlap.pairs;
      f.triggers_a = overlap.a;
      f.triggers_b = overlap.b;
      f.conditions_a = ConditionEvidence(x.guards);
      f.conditions_b = ConditionEvidence(y.guards);
      f.targets_b = ConditionEvidence(enabled);
      out.push_back(std::move(f));
    }
  }
  return out;
}

TriggerOverlap Reversed(const TriggerOverlap& overlap) {
  TriggerOverlap out;
  out.a = overlap.b;
  out.b = overlap.a;
  // Keep the pair list ordered by the new side A.
  for (const Evidence& ta : out.a) {
    for (const auto& [x, y] : overlap.pairs) {
      if (y == ta.id) out.pairs.emplace_back(y, x);
    }
  }
  return out;
}

}  // namespace

CoarseCategory Aggregate(ThreatCategory fine) {
  switch (fine) {
    case ThreatCategory::kWAC:
    case ThreatCategory::kSAC:
      return CoarseCategory::kAC;
    case ThreatCategory::kWTC:
    case ThreatCategory::kSTC:
      return CoarseCategory::kTC;
    case ThreatCategory::kWCC:
    case ThreatCategory::kSCC:
      return CoarseCategory::kCC;
  }
  return CoarseCategory::kAC;
}

bool IsStrong(ThreatCategory fine) {
  return fine == ThreatCategory::kSAC || fine == ThreatCategory::kSTC ||
         fine == ThreatCategory::kSCC;
}

const char* CategoryName(ThreatCategory fine) {
  switch (fine) {
    case ThreatCategory::kWAC:
      return "WAC";
    case ThreatCategory::kSAC:
      return "SAC";
    case ThreatCategory::kWTC:
      return "WTC";
    case ThreatCategory::kSTC:
      return "STC";
    case ThreatCategory::kWCC:
      return "WCC";
    case ThreatCategory::kSCC:
      return "SCC";
  }
  return "?";
}

const char* CoarseName(CoarseCategory coarse) {
  switch (coarse) {
    case CoarseCategory::kAC:
      return "AC";
    case CoarseCategory::kTC:
      return "TC";
    case CoarseCategory::kCC:
      return "CC";
  }
  return "?";
}

std::optional<ThreatCategory> ParseCategory(std::string_view text) {
  std::string upper = absl::AsciiStrToUpper(std::string(text));
  for (ThreatCategory c : kAllCategories) {
    if (upper == CategoryName(c)) return c;
  }
  return std::nullopt;
}

std::optional<CoarseCategory> ParseCoarse(std::string_view text) {
  std::string upper = absl::AsciiStrToUpper(std::string(text));
  for (CoarseCategory c : kAllCoarse) {
    if (upper == CoarseName(c)) return c;
  }
  return std::nullopt;
}

std::string Finding::Key() const {
  return absl::StrCat(CategoryName(category), ":", source_id, ">",
                      absl::StrJoin(target_ids, "+"));
}

int CategoryCounts::Of(CoarseCategory c) const {
  int total = 0;
  for (ThreatCategory fine : kAllCategories) {
    if (Aggregate(fine) == c) total += Of(fine);
  }
  return total;
}

int CategoryCounts::Total() const {
  int total = 0;
  for (int n : fine) total += n;
  return total;
}

CategoryCounts FindingReport::Counts() const {
  CategoryCounts counts;
  for (const Finding& f : findings) {
    ++counts.fine[static_cast<size_t>(f.category)];
  }
  return counts;
}

const char* ThreatDescription(CoarseCategory family) {
  switch (family) {
    case CoarseCategory::kAC:
      return kContradictionText;
    case CoarseCategory::kTC:
      return kCascadeText;
    case CoarseCategory::kCC:
      return kConditionCascadeText;
  }
  return "";
}

std::vector<Finding> ClassifyActionContradiction(const Rule& a, const Rule& b) {
  return ActionContradictions(a, b, OverlappingTriggers(a, b), {});
}

std::vector<Finding> ClassifyTriggerCascade(const Rule& a, const Rule& b,
                                            bool strict) {
  std::vector<Finding> out;
  std::vector<Condition> b_conditions = b.AllConditions();
  for (const GuardedAction& x : a.actions) {
    for (const Trigger& t : b.triggers) {
      if (!ActionMatchesTrigger(x.action, t, strict)) continue;
      bool strong = x.guards.empty() && b_conditions.empty();
      if (!strong && !ConditionsOverlap(x.guards, b_conditions)) continue;
      Finding f = NewFinding(strong ? ThreatCategory::kSTC : ThreatCategory::kWTC,
                             a, b, x.action);
      f.target_ids = {t.id};
      for (const Trigger& ta : a.triggers) {
        f.trigger_pairs.emplace_back(ta.id, t.id);
        f.triggers_a.push_back(TriggerEvidence(ta));
      }
      f.triggers_b = {TriggerEvidence(t)};
      f.conditions_a = ConditionEvidence(x.guards);
      f.conditions_b = ConditionEvidence(b_conditions);
      f.targets_b = {TriggerEvidence(t)};
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Finding> ClassifyConditionCascade(const Rule& a, const Rule& b) {
  return ConditionCascades(a, b, OverlappingTriggers(a, b));
}

std::vector<Finding> DetectPair(const Rule& a, const Rule& b,
                                const DetectorConfig& config) {
  TriggerOverlap overlap = OverlappingTriggers(a, b);
  std::vector<Finding> out = ActionContradictions(
      a, b, overlap, CascadeLinkedActions(a, b, overlap));
  auto append = [&out](std::vector<Finding> more) {
    for (Finding& f : more) out.push_back(std::move(f));
  };
  append(ClassifyTriggerCascade(a, b, config.strict_event_matching));
  append(ClassifyTriggerCascade(b, a, config.strict_event_matching));
  append(ConditionCascades(a, b, overlap));
  append(ConditionCascades(b, a, Reversed(overlap)));
  return out;
}

FindingReport DetectFile(const RuleSet& rules, const DetectorConfig& config) {
  FindingReport report;
  report.file = rules.file_id;
  for (size_t i = 0; i < rules.rules.size(); ++i) {
    for (size_t j = i + 1; j < rules.rules.size(); ++j) {
      for (Finding& f : DetectPair(rules.rules[i], rules.rules[j], config)) {
        report.findings.push_back(std::move(f));
      }
    }
  }
  return report;
}

}  // namespace ritscan
