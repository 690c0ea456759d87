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

#include "ritscan/mutator.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "ritscan/lexer.h"
#include "ritscan/parser.h"
#include "ritscan/semantics.h"

namespace ritscan {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr char kWindowText[] = "time >= 8:00 && time <= 9:00";
constexpr size_t kMaxCandidates = 64;

struct Edit {
  size_t offset = 0;
  size_t length = 0;
  std::string text;
};

std::string ApplyEdits(const std::string& content, std::vector<Edit> edits) {
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& x, const Edit& y) {
    return x.offset > y.offset;
  });
  std::string out = content;
  for (const Edit& e : edits) out.replace(e.offset, e.length, e.text);
  return out;
}

// One way of injecting the threat: the text edits plus what they add.
struct Candidate {
  std::vector<Edit> edits;
  Injection injection;
};

bool Overlapping(const Rule& a, const Rule& b) {
  for (const Trigger& ta : a.triggers) {
    for (const Trigger& tb : b.triggers) {
      if (TriggersOverlap(ta, tb).overlap) return true;
    }
  }
  return false;
}

std::vector<Condition> Concat(std::vector<Condition> a,
                              const std::vector<Condition>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool AnyEnabled(const Action& x, const std::vector<Condition>& guards) {
  for (const Condition& c : guards) {
    if (ActionEnablesCondition(x, c)) return true;
  }
  return false;
}

Action MakeAction(ActionKind kind, const std::string& item, const Value& value,
                  bool method_syntax = false) {
  Action a;
  a.kind = kind;
  a.item = item;
  a.value = value;
  a.method_syntax = method_syntax;
  a.text = ActionSource(kind, item, value, method_syntax);
  return a;
}

Condition MakeComparison(const std::string& item, CompareOp op,
                         const Value& value) {
  Condition c;
  c.kind = ConditionKind::kItemComparison;
  c.item = item;
  c.op = op;
  c.value = value;
  c.text = ComparisonSource(item, op, value);
  return c;
}

Value On() { return Value::FromLiteral("ON", false); }
Value Off() { return Value::FromLiteral("OFF", false); }

// A value written by an action that makes `c` true, if one is easy to name.
std::optional<Value> EnablingValue(const Condition& c) {
  if (c.kind != ConditionKind::kItemComparison) return std::nullopt;
  std::optional<Value> v;
  switch (c.op) {
    case CompareOp::kEq:
    case CompareOp::kGe:
    case CompareOp::kLe:
      v = c.value;
      break;
    case CompareOp::kNe:
      v = Antonym(c.value);
      break;
    case CompareOp::kGt:
      if (c.value.number()) v = Value::Number(c.value.number()->Plus(1));
      break;
    case CompareOp::kLt:
      if (c.value.number()) v = Value::Number(c.value.number()->Plus(-1));
      break;
  }
  return v;
}

// Builds edits against one seed file and mints fresh item names.
class EditBuilder {
 public:
  explicit EditBuilder(const SourceFile& seed) : seed_(seed) {
    for (const Token& t : Tokenize(seed)) {
      if (t.kind == TokenKind::kIdent) taken_.insert(t.text);
    }
  }

  std::string Fresh(const std::string& prefix) {
    for (int k = 1;; ++k) {
      std::string name = absl::StrCat(prefix, "_", k);
      if (taken_.insert(name).second) return name;
    }
  }

  // Indentation used by the rule's top-level statements.
  std::string Indent(const Rule& rule) const {
    const std::string& text = seed_.content();
    for (const GuardedAction& ga : rule.actions) {
      if (ga.guards.size() != rule.conditions.size()) continue;
      size_t begin = ga.action.span.begin_offset;
      size_t line = text.rfind('\n', begin == 0 ? 0 : begin - 1);
      line = line == std::string::npos ? 0 : line + 1;
      std::string prefix = text.substr(line, begin - line);
      if (prefix.find_first_not_of(" \t") == std::string::npos) return prefix;
    }
    return "    ";
  }

  // Appends statements (possibly multi-line) at the end of the script.
  Edit InsertBeforeEnd(const Rule& rule, const std::vector<std::string>& stmts) const {
    const std::string& text = seed_.content();
    std::string indent = Indent(rule);
    std::string body;
    for (const std::string& stmt : stmts) {
      for (absl::string_view line : absl::StrSplit(stmt, '\n')) {
        absl::StrAppend(&body, indent, line, "\n");
      }
    }
    size_t end = rule.end_keyword.begin_offset;
    size_t line = text.rfind('\n', end == 0 ? 0 : end - 1);
    line = line == std::string::npos ? 0 : line + 1;
    bool end_starts_line =
        text.substr(line, end - line).find_first_not_of(" \t\r") == std::string::npos;
    if (end_starts_line) return Edit{line, 0, body};
    return Edit{end, 0, absl::StrCat("\n", body)};
  }

  Edit WrapAction(const Action& action, const std::string& condition) const {
    std::string original(seed_.Text(action.span));
    return Edit{action.span.begin_offset,
                action.span.end_offset - action.span.begin_offset,
                absl::StrCat("if (", condition, ") { ", original, " }")};
  }

  Edit ReplaceTriggers(const Rule& rule, const std::string& trigger) const {
    std::string clause = absl::StrCat("\n    ", trigger);
    for (const Condition& c : rule.conditions) absl::StrAppend(&clause, " && ", c.text);
    absl::StrAppend(&clause, "\n");
    return Edit{rule.trigger_clause.begin_offset,
                rule.trigger_clause.end_offset - rule.trigger_clause.begin_offset,
                clause};
  }

 private:
  const SourceFile& seed_;
  std::set<std::string> taken_;
};

std::string Guarded(const std::string& condition, const std::string& stmt) {
  return absl::StrCat("if (", condition, ") {\n    ", stmt, "\n}");
}

// Signature of a finding that survives id renumbering.
std::string Signature(const Finding& f) {
  std::vector<std::string> targets;
  for (const Evidence& e : f.targets_b) targets.push_back(e.text);
  return absl::StrCat(CategoryName(f.category), "|", f.rule_a.id, "|",
                      f.rule_b.id, "|", f.action_a.text, "|",
                      absl::StrJoin(targets, "&"));
}

std::map<std::string, int> SignatureCounts(
    const FindingReport& report,
    const std::function<bool(const Finding&)>& keep) {
  std::map<std::string, int> counts;
  for (const Finding& f : report.findings) {
    if (keep(f)) ++counts[Signature(f)];
  }
  return counts;
}

bool SameRuleShape(const RuleSet& seed, const RuleSet& mutant) {
  if (seed.rules.size() != mutant.rules.size()) return false;
  for (size_t i = 0; i < seed.rules.size(); ++i) {
    if (seed.rules[i].id != mutant.rules[i].id ||
        seed.rules[i].name != mutant.rules[i].name) {
      return false;
    }
  }
  return true;
}

class Attempt {
 public:
  Attempt(const SourceFile& seed, const RuleSet& rules, RulePair pair)
      : seed_(seed), rules_(rules), pair_(pair) {
    DetectorConfig strict;
    seed_report_ = DetectFile(rules, strict);
  }

  // Parses and checks a candidate; returns the mutant text when acceptable.
  std::optional<std::string> Accept(const Candidate& candidate) const {
    std::string text = ApplyEdits(seed_.content(), candidate.edits);
    RuleSet mutant = ParseRuleSet(SourceFile(seed_.path(), text));
    if (mutant.ErrorCount() != 0 || !SameRuleShape(rules_, mutant)) {
      return std::nullopt;
    }
    const std::string& a = rules_.rules[pair_.a].id;
    const std::string& b = rules_.rules[pair_.b].id;
    auto outside = [&](const Finding& f) {
      bool inside = (f.rule_a.id == a && f.rule_b.id == b) ||
                    (f.rule_a.id == b && f.rule_b.id == a);
      return !inside;
    };
    auto before = SignatureCounts(seed_report_, outside);
    auto after = SignatureCounts(DetectFile(mutant, DetectorConfig{}), outside);
    for (const auto& [signature, count] : after) {
      auto it = before.find(signature);
      if (it == before.end() || it->second < count) return std::nullopt;
    }
    return text;
  }

 private:
  const SourceFile& seed_;
  const RuleSet& rules_;
  RulePair pair_;
  FindingReport seed_report_;
};

// Candidate generation per operator. Each returns candidates in preference
// order; semantic checks keep candidates that are sound by construction.
class Strategies {
 public:
  Strategies(const SourceFile& seed, const RuleSet& rules, RulePair pair)
      : builder_(seed),
        a_(rules.rules[pair.a]),
        b_(rules.rules[pair.b]) {}

  std::vector<Candidate> For(const MutationOperator& op) {
    switch (op.target) {
      case ThreatCategory::kSAC:
        return Sac();
      case ThreatCategory::kWAC:
        return Wac();
      case ThreatCategory::kSTC:
      case ThreatCategory::kWTC:
        return Cascade(op.target == ThreatCategory::kWTC, op.post_update);
      case ThreatCategory::kSCC:
        return Scc();
      case ThreatCategory::kWCC:
        return Wcc();
    }
    return {};
  }

 private:
  Candidate Insert(const std::string& strategy, const Rule& rule,
                   const std::vector<std::string>& stmts) {
    Candidate c;
    c.injection.strategy = strategy;
    c.edits.push_back(builder_.InsertBeforeEnd(rule, stmts));
    return c;
  }

  void AddInsert(Candidate& c, const Rule& rule,
                 const std::vector<std::string>& stmts) {
    c.edits.push_back(builder_.InsertBeforeEnd(rule, stmts));
  }

  // A statement for rule A, guarded by a fresh mode switch when A has no
  // conditions but the threat needs one.
  std::string ForA(const Action& x, bool needs_guard, Injection& inj) {
    inj.actions_added.push_back(x.text);
    if (!needs_guard) return x.text;
    Condition guard = MakeComparison(builder_.Fresh("Mut_Mode"), CompareOp::kEq, On());
    inj.conditions_added.push_back(guard.text);
    return Guarded(guard.text, x.text);
  }

  std::vector<Candidate> Sac() {
    std::vector<Candidate> out;
    for (const GuardedAction& x : a_.actions) {
      if (!x.guards.empty()) continue;
      Action y = MakeAction(x.action.kind, x.action.item, Antonym(x.action.value),
                            x.action.method_syntax);
      Candidate c = Insert("vocabulary-antonym", b_, {y.text});
      c.injection.item = y.item;
      c.injection.values = {x.action.value.ToSource(), y.value.ToSource()};
      c.injection.actions_added = {y.text};
      out.push_back(std::move(c));
    }
    std::string item = builder_.Fresh("Mut_Item");
    Action x = MakeAction(ActionKind::kSendCommand, item, On());
    Action y = MakeAction(ActionKind::kSendCommand, item, Off());
    Candidate c = Insert("fresh-item", a_, {x.text});
    AddInsert(c, b_, {y.text});
    c.injection.item = item;
    c.injection.values = {"ON", "OFF"};
    c.injection.actions_added = {x.text, y.text};
    out.push_back(std::move(c));
    return out;
  }

  std::vector<Candidate> Wac() {
    std::vector<Candidate> out;
    for (const GuardedAction& x : a_.actions) {
      Action y = MakeAction(x.action.kind, x.action.item, Antonym(x.action.value),
                            x.action.method_syntax);
      auto sound = [&](const std::vector<Condition>& gy) {
        return !(x.guards.empty() && gy.empty()) &&
               ConditionsOverlap(x.guards, gy) && !AnyEnabled(x.action, gy) &&
               !AnyEnabled(y, x.guards);
      };
      auto base = [&](const std::string& strategy) {
        Candidate c;
        c.injection.strategy = strategy;
        c.injection.item = y.item;
        c.injection.values = {x.action.value.ToSource(), y.value.ToSource()};
        c.injection.actions_added = {y.text};
        return c;
      };
      if (sound(b_.conditions)) {
        Candidate c = base("vocabulary-antonym");
        AddInsert(c, b_, {y.text});
        out.push_back(std::move(c));
      }
      std::set<std::string> reused;
      for (const Condition& cond : b_.AllConditions()) {
        if (std::find(b_.conditions.begin(), b_.conditions.end(), cond) !=
            b_.conditions.end()) {
          continue;
        }
        if (!reused.insert(cond.text).second) continue;
        if (!sound(Concat(b_.conditions, {cond}))) continue;
        Candidate c = base("reuse-condition");
        AddInsert(c, b_, {Guarded(cond.text, y.text)});
        c.injection.conditions_added = {cond.text};
        out.push_back(std::move(c));
      }
      Condition mode = MakeComparison(builder_.Fresh("Mut_Mode"), CompareOp::kEq, On());
      if (sound(Concat(b_.conditions, {mode}))) {
        Candidate c = base("fresh-guard");
        AddInsert(c, b_, {Guarded(mode.text, y.text)});
        c.injection.conditions_added = {mode.text};
        out.push_back(std::move(c));
      }
    }
    std::string item = builder_.Fresh("Mut_Item");
    Condition mode = MakeComparison(builder_.Fresh("Mut_Mode"), CompareOp::kEq, On());
    Action x = MakeAction(ActionKind::kSendCommand, item, On());
    Action y = MakeAction(ActionKind::kSendCommand, item, Off());
    if (ConditionsOverlap(a_.conditions, Concat(b_.conditions, {mode}))) {
      Candidate c = Insert("fresh-item", a_, {x.text});
      AddInsert(c, b_, {Guarded(mode.text, y.text)});
      c.injection.item = item;
      c.injection.values = {"ON", "OFF"};
      c.injection.actions_added = {x.text, y.text};
      c.injection.conditions_added = {mode.text};
      out.push_back(std::move(c));
    }
    return out;
  }

  // STC and WTC. The cascading action goes at the top level of A.
  std::vector<Candidate> Cascade(bool weak, bool post_update) {
    struct Target {
      std::string strategy;
      std::string item;
      Value value;
      std::optional<std::string> replacement;  // new trigger clause for B
    };
    std::vector<Target> targets;
    for (const Trigger& t : b_.triggers) {
      Value v = On();
      if (post_update) {
        if (t.kind != TriggerKind::kItemCommand) continue;
        if (t.command_value) v = *t.command_value;
      } else if (t.kind == TriggerKind::kItemChanged) {
        if (t.to_value) v = *t.to_value;
      } else if (t.kind == TriggerKind::kItemCommand) {
        if (t.command_value) v = *t.command_value;
      } else if (t.kind != TriggerKind::kItemUpdate) {
        continue;
      }
      targets.push_back({"vocabulary-trigger", t.item, v, std::nullopt});
    }
    std::string fresh = builder_.Fresh("Mut_Item");
    targets.push_back({"fresh-trigger", fresh, On(),
                       post_update ? absl::StrCat("Item ", fresh, " received command")
                                   : absl::StrCat("Item ", fresh, " changed to ON")});

    ActionKind kind = post_update ? ActionKind::kPostUpdate : ActionKind::kSendCommand;
    std::vector<Condition> b_all = b_.AllConditions();
    bool needs_condition = weak && a_.conditions.empty() && b_all.empty();
    std::vector<Candidate> out;
    for (const Target& target : targets) {
      Action x = MakeAction(kind, target.item, target.value);
      auto base = [&](const std::string& suffix) {
        Candidate c;
        c.injection.strategy = target.strategy + suffix;
        c.injection.item = target.item;
        c.injection.values = {target.value.ToSource()};
        c.injection.actions_added = {x.text};
        if (target.replacement) {
          c.edits.push_back(builder_.ReplaceTriggers(b_, *target.replacement));
          for (const Trigger& t : b_.triggers) c.injection.triggers_replaced.push_back(t.text);
        }
        return c;
      };
      if (!weak) {
        Candidate c = base("");
        AddInsert(c, a_, {x.text});
        out.push_back(std::move(c));
        continue;
      }
      if (!needs_condition) {
        if (!ConditionsOverlap(a_.conditions, b_all)) continue;
        Candidate c = base("");
        AddInsert(c, a_, {x.text});
        out.push_back(std::move(c));
        continue;
      }
      if (!b_.actions.empty()) {
        Candidate c = base("+guard-b");
        AddInsert(c, a_, {x.text});
        c.edits.push_back(builder_.WrapAction(b_.actions[0].action, kWindowText));
        c.injection.conditions_added = {kWindowText};
        out.push_back(std::move(c));
      }
      Candidate c = base("+guard-a");
      AddInsert(c, a_, {Guarded(kWindowText, x.text)});
      c.injection.conditions_added = {kWindowText};
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<Candidate> Scc() {
    std::vector<Candidate> out;
    bool a_needs_guard = !a_.HasConditions();
    std::set<std::string> seen;
    for (const GuardedAction& y : b_.actions) {
      if (y.guards.size() != 1) continue;
      const Condition& cond = y.guards[0];
      auto v = EnablingValue(cond);
      if (!v) continue;
      Action x = MakeAction(ActionKind::kSendCommand, cond.item, *v);
      if (!ActionEnablesCondition(x, cond) || !seen.insert(x.text).second) continue;
      Candidate c;
      c.injection.strategy = "vocabulary-guard";
      c.injection.item = cond.item;
      c.injection.values = {v->ToSource()};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      out.push_back(std::move(c));
    }
    std::string guard_item = builder_.Fresh("Mut_Guard");
    Condition guard = MakeComparison(guard_item, CompareOp::kEq, On());
    Action x = MakeAction(ActionKind::kSendCommand, guard_item, On());
    {
      std::string item = builder_.Fresh("Mut_Item");
      Action y = MakeAction(ActionKind::kSendCommand, item, On());
      Candidate c;
      c.injection.strategy = "fresh-guarded-action";
      c.injection.item = guard_item;
      c.injection.values = {"ON"};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      AddInsert(c, b_, {Guarded(guard.text, y.text)});
      c.injection.actions_added.push_back(y.text);
      c.injection.conditions_added.push_back(guard.text);
      out.push_back(std::move(c));
    }
    for (const GuardedAction& y : b_.actions) {
      if (!y.guards.empty()) continue;
      Candidate c;
      c.injection.strategy = "fresh-guard-wrap";
      c.injection.item = guard_item;
      c.injection.values = {"ON"};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      c.edits.push_back(builder_.WrapAction(y.action, guard.text));
      c.injection.conditions_added.push_back(guard.text);
      out.push_back(std::move(c));
      break;
    }
    return out;
  }

  std::vector<Candidate> Wcc() {
    std::vector<Candidate> out;
    bool a_needs_guard = !a_.HasConditions();
    std::set<std::string> seen;
    for (const GuardedAction& y : b_.actions) {
      if (y.guards.size() < 2) continue;
      for (const Condition& cond : y.guards) {
        auto v = EnablingValue(cond);
        if (!v) continue;
        Action x = MakeAction(ActionKind::kSendCommand, cond.item, *v);
        size_t enabled = 0;
        for (const Condition& g : y.guards) enabled += ActionEnablesCondition(x, g);
        if (enabled == 0 || enabled == y.guards.size()) continue;
        if (!seen.insert(x.text).second) continue;
        Candidate c;
        c.injection.strategy = "vocabulary-guard";
        c.injection.item = cond.item;
        c.injection.values = {v->ToSource()};
        AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
        out.push_back(std::move(c));
      }
    }
    std::string guard_item = builder_.Fresh("Mut_Guard");
    Condition guard = MakeComparison(guard_item, CompareOp::kEq, On());
    Action x = MakeAction(ActionKind::kSendCommand, guard_item, On());
    for (const GuardedAction& y : b_.actions) {
      if (y.guards.empty()) continue;
      Candidate c;
      c.injection.strategy = "fresh-guard-wrap";
      c.injection.item = guard_item;
      c.injection.values = {"ON"};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      c.edits.push_back(builder_.WrapAction(y.action, guard.text));
      c.injection.conditions_added.push_back(guard.text);
      out.push_back(std::move(c));
    }
    std::string pair_condition = absl::StrCat(guard.text, " && ", kWindowText);
    {
      std::string item = builder_.Fresh("Mut_Item");
      Action y = MakeAction(ActionKind::kSendCommand, item, On());
      Candidate c;
      c.injection.strategy = "fresh-guarded-action";
      c.injection.item = guard_item;
      c.injection.values = {"ON"};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      AddInsert(c, b_, {Guarded(pair_condition, y.text)});
      c.injection.actions_added.push_back(y.text);
      c.injection.conditions_added.push_back(pair_condition);
      out.push_back(std::move(c));
    }
    for (const GuardedAction& y : b_.actions) {
      if (!y.guards.empty()) continue;
      Candidate c;
      c.injection.strategy = "fresh-guard-wrap";
      c.injection.item = guard_item;
      c.injection.values = {"ON"};
      AddInsert(c, a_, {ForA(x, a_needs_guard, c.injection)});
      c.edits.push_back(builder_.WrapAction(y.action, pair_condition));
      c.injection.conditions_added.push_back(pair_condition);
      out.push_back(std::move(c));
      break;
    }
    return out;
  }

  EditBuilder builder_;
  const Rule& a_;
  const Rule& b_;
};

bool HasGuardedAction(const Rule& rule) {
  for (const GuardedAction& ga : rule.actions) {
    if (!ga.guards.empty()) return true;
  }
  return false;
}

bool Contradiction(const MutationOperator& op) {
  return Aggregate(op.target) == CoarseCategory::kAC;
}

std::vector<RulePair> StructuralPairs(const RuleSet& rules,
                                      const MutationOperator& op) {
  std::vector<RulePair> out;
  for (size_t i = 0; i < rules.rules.size(); ++i) {
    for (size_t j = 0; j < rules.rules.size(); ++j) {
      if (i == j || (Contradiction(op) && j < i)) continue;
      if (PairPreconditionsHold(rules, {i, j}, op)) out.push_back({i, j});
    }
  }
  return out;
}

Json InjectionJson(const Injection& inj) {
  return Json{{"strategy", inj.strategy},
              {"item", inj.item},
              {"values", inj.values},
              {"conditions_added", inj.conditions_added},
              {"actions_added", inj.actions_added},
              {"triggers_replaced", inj.triggers_replaced}};
}

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

absl::Status WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) return absl::InternalError(absl::StrCat("cannot write ", path.string()));
  return absl::OkStatus();
}

struct Eligible {
  size_t seed_index = 0;
  MutationOperator op;
  Mutant mutant;
};

std::vector<Eligible> EligibleForSeed(size_t seed_index, const SourceFile& seed,
                                      const RuleSet& rules,
                                      const std::vector<MutationOperator>& ops) {
  std::vector<Eligible> out;
  for (const MutationOperator& op : ops) {
    for (RulePair pair : StructuralPairs(rules, op)) {
      auto mutant = ApplyOperator(seed, rules, pair, op);
      if (mutant.ok()) out.push_back({seed_index, op, *std::move(mutant)});
    }
  }
  return out;
}

}  // namespace

std::string MutationOperator::Name() const {
  std::string name = CategoryName(target);
  if (post_update) name += "-postUpdate";
  return name;
}

std::optional<MutationOperator> ParseOperator(const std::string& name) {
  std::string base = name;
  bool post_update = false;
  const std::string suffix = "-postUpdate";
  if (base.size() > suffix.size() &&
      base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    base.resize(base.size() - suffix.size());
    post_update = true;
  }
  auto category = ParseCategory(base);
  if (!category) return std::nullopt;
  if (post_update && Aggregate(*category) != CoarseCategory::kTC) return std::nullopt;
  return MutationOperator{*category, post_update};
}

std::vector<MutationOperator> DefaultOperators(bool post_update_variants) {
  std::vector<MutationOperator> ops;
  for (ThreatCategory c : kAllCategories) ops.push_back({c, false});
  if (post_update_variants) {
    ops.push_back({ThreatCategory::kWTC, true});
    ops.push_back({ThreatCategory::kSTC, true});
  }
  return ops;
}

bool PairPreconditionsHold(const RuleSet& rules, RulePair pair,
                           const MutationOperator& op) {
  if (pair.a == pair.b || pair.a >= rules.rules.size() ||
      pair.b >= rules.rules.size()) {
    return false;
  }
  if (Contradiction(op) && pair.a > pair.b) return false;
  const Rule& a = rules.rules[pair.a];
  const Rule& b = rules.rules[pair.b];
  switch (op.target) {
    case ThreatCategory::kSAC:
      return Overlapping(a, b) && a.conditions.empty() && b.conditions.empty();
    case ThreatCategory::kWAC:
      return Overlapping(a, b) && Satisfiable(Concat(a.conditions, b.conditions));
    case ThreatCategory::kSTC:
      return a.conditions.empty() && !b.HasConditions();
    case ThreatCategory::kWTC:
      return Satisfiable(Concat(a.conditions, b.AllConditions()));
    case ThreatCategory::kSCC:
      return Overlapping(a, b) && b.conditions.empty() && HasGuardedAction(b);
    case ThreatCategory::kWCC:
      return Overlapping(a, b) && HasGuardedAction(b);
  }
  return false;
}

absl::StatusOr<Mutant> ApplyOperator(const SourceFile& seed,
                                     const RuleSet& rules, RulePair pair,
                                     const MutationOperator& op) {
  if (!PairPreconditionsHold(rules, pair, op)) {
    return absl::FailedPreconditionError(
        absl::StrCat(op.Name(), " preconditions do not hold for the pair"));
  }
  Strategies strategies(seed, rules, pair);
  Attempt attempt(seed, rules, pair);
  std::vector<Candidate> candidates = strategies.For(op);
  if (candidates.size() > kMaxCandidates) candidates.resize(kMaxCandidates);
  for (const Candidate& candidate : candidates) {
    auto text = attempt.Accept(candidate);
    if (!text) continue;
    Mutant mutant;
    mutant.source = *std::move(text);
    mutant.record.seed_file = seed.path();
    mutant.record.op = op.Name();
    mutant.record.target = op.target;
    mutant.record.rule_a = rules.rules[pair.a].id;
    mutant.record.rule_b = rules.rules[pair.b].id;
    mutant.record.injection = candidate.injection;
    return mutant;
  }
  return absl::FailedPreconditionError(
      absl::StrCat("no ", op.Name(), " strategy applies to the pair"));
}

std::vector<RulePair> EnumerateEligiblePairs(const SourceFile& seed,
                                             const RuleSet& rules,
                                             const MutationOperator& op) {
  std::vector<RulePair> out;
  for (RulePair pair : StructuralPairs(rules, op)) {
    if (ApplyOperator(seed, rules, pair, op).ok()) out.push_back(pair);
  }
  return out;
}

absl::StatusOr<Corpus> GenerateCorpus(const std::vector<SourceFile>& seeds,
                                      const CorpusOptions& options) {
  fs::path out_dir(options.output_dir);
  if (!options.output_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir) ||
        ::access(out_dir.c_str(), W_OK | X_OK) != 0) {
      return absl::PermissionDeniedError(
          absl::StrCat("output directory ", options.output_dir, " is not writable"));
    }
  }
  std::vector<RuleSet> parsed;
  for (const SourceFile& seed : seeds) {
    RuleSet rules = ParseRuleSet(seed);
    if (rules.ErrorCount() != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("seed ", seed.path(), " does not parse cleanly"));
    }
    parsed.push_back(std::move(rules));
  }

  std::vector<std::future<std::vector<Eligible>>> jobs;
  for (size_t i = 0; i < seeds.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, EligibleForSeed, i,
                              std::cref(seeds[i]), std::cref(parsed[i]),
                              std::cref(options.operators)));
  }
  std::vector<Eligible> eligible;
  for (auto& job : jobs) {
    for (Eligible& e : job.get()) eligible.push_back(std::move(e));
  }

  std::vector<size_t> chosen(eligible.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  Corpus corpus;
  corpus.manifest.candidates = eligible.size();
  if (options.strategy.sample_size) {
    size_t n = std::min(*options.strategy.sample_size, chosen.size());
    std::mt19937_64 rng(options.strategy.seed);
    for (size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<size_t> pick(i, chosen.size() - 1);
      std::swap(chosen[i], chosen[pick(rng)]);
    }
    chosen.resize(n);
    std::sort(chosen.begin(), chosen.end());
    corpus.manifest.rng_seed = options.strategy.seed;
  }

  for (const SourceFile& seed : seeds) corpus.manifest.seeds.push_back(seed.path());
  std::set<std::string> ids;
  for (size_t index : chosen) {
    Eligible& e = eligible[index];
    MutantRecord record = e.mutant.record;
    record.mutant_id = absl::StrCat(Stem(seeds[e.seed_index].path()), "-", record.op,
                                    "-", record.rule_a, "-", record.rule_b);
    if (!ids.insert(record.mutant_id).second) {
      return absl::InternalError(absl::StrCat("duplicate mutant id ", record.mutant_id));
    }
    if (!options.output_dir.empty()) {
      record.output_path = record.mutant_id + ".rules";
    }
    ++corpus.manifest.totals[record.op];
    corpus.manifest.records.push_back(std::move(record));
    corpus.sources.push_back(e.mutant.source);
  }

  if (!options.output_dir.empty()) {
    std::string manifest;
    for (size_t i = 0; i < corpus.manifest.records.size(); ++i) {
      const MutantRecord& record = corpus.manifest.records[i];
      auto status = WriteFile(out_dir / record.output_path, corpus.sources[i]);
      if (!status.ok()) return status;
      absl::StrAppend(&manifest, ManifestRecordJson(record), "\n");
    }
    auto status = WriteFile(out_dir / "manifest.jsonl", manifest);
    if (!status.ok()) return status;
    Json summary;
    summary["seeds"] = corpus.manifest.seeds;
    std::vector<std::string> op_names;
    for (const MutationOperator& op : options.operators) op_names.push_back(op.Name());
    summary["operators"] = op_names;
    summary["strategy"] = options.strategy.sample_size ? "sample" : "exhaustive";
    if (options.strategy.sample_size) {
      summary["sample_size"] = *options.strategy.sample_size;
      summary["rng_seed"] = options.strategy.seed;
    }
    summary["eligible_candidates"] = corpus.manifest.candidates;
    summary["mutants"] = corpus.manifest.records.size();
    summary["totals"] = corpus.manifest.totals;
    status = WriteFile(out_dir / "summary.json", summary.dump(2) + "\n");
    if (!status.ok()) return status;
  }
  return corpus;
}

std::string ManifestRecordJson(const MutantRecord& record) {
  Json j{{"mutant_id", record.mutant_id},
         {"seed_file", record.seed_file},
         {"operator", record.op},
         {"fine", CategoryName(record.target)},
         {"coarse", CoarseName(Aggregate(record.target))},
         {"rule_a", record.rule_a},
         {"rule_b", record.rule_b},
         {"injection", InjectionJson(record.injection)},
         {"output_path", record.output_path}};
  return j.dump();
}

absl::StatusOr<MutantRecord> ParseManifestRecord(const std::string& line) {
  Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("manifest record is not a JSON object");
  }
  try {
    MutantRecord r;
    r.mutant_id = j.at("mutant_id").get<std::string>();
    r.seed_file = j.value("seed_file", "");
    r.op = j.at("operator").get<std::string>();
    auto op = ParseOperator(r.op);
    if (!op) return absl::InvalidArgumentError(absl::StrCat("unknown operator ", r.op));
    r.target = op->target;
    r.rule_a = j.at("rule_a").get<std::string>();
    r.rule_b = j.at("rule_b").get<std::string>();
    r.output_path = j.value("output_path", "");
    if (j.contains("injection")) {
      const Json& inj = j["injection"];
      r.injection.strategy = inj.value("strategy", "");
      r.injection.item = inj.value("item", "");
      r.injection.values = inj.value("values", std::vector<std::string>{});
      r.injection.conditions_added =
          inj.value("conditions_added", std::vector<std::string>{});
      r.injection.actions_added = inj.value("actions_added", std::vector<std::string>{});
      r.injection.triggers_replaced =
          inj.value("triggers_replaced", std::vector<std::string>{});
    }
    return r;
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed manifest record: ", e.what()));
  }
}

absl::StatusOr<std::vector<MutantRecord>> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<MutantRecord> records;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = ParseManifestRecord(line);
    if (!record.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", number, ": ", record.status().message()));
    }
    if (!record->output_path.empty() &&
        std::filesystem::path(record->output_path).is_relative()) {
      record->output_path =
          (std::filesystem::path(path).parent_path() / record->output_path).string();
    }
    records.push_back(*std::move(record));
  }
  return records;
}

bool InjectionRecovered(const RuleSet& seed, const RuleSet& mutant,
                        const MutantRecord& record, const DetectorConfig& config) {
  auto in_pair = [&](const Finding& f) {
    return f.category == record.target && f.rule_a.id == record.rule_a &&
           f.rule_b.id == record.rule_b;
  };
  auto before = SignatureCounts(DetectFile(seed, config), in_pair);
  auto after = SignatureCounts(DetectFile(mutant, config), in_pair);
  for (const auto& [signature, count] : after) {
    auto it = before.find(signature);
    if (it == before.end() || it->second < count) return true;
  }
  return false;
}

RecoveryOutcome EvaluateRecovery(const SourceFile& seed, const SourceFile& mutant,
                                 const MutantRecord& record,
                                 const DetectorConfig& config) {
  RecoveryOutcome outcome;
  outcome.mutant_id = record.mutant_id;
  outcome.op = record.op;
  RuleSet seed_rules = ParseRuleSet(seed);
  RuleSet mutant_rules = ParseRuleSet(mutant);
  outcome.recovered = InjectionRecovered(seed_rules, mutant_rules, record, config);
  if (!outcome.recovered) {
    DetectorConfig lenient = config;
    lenient.strict_event_matching = false;
    bool lenient_hit = config.strict_event_matching &&
                       InjectionRecovered(seed_rules, mutant_rules, record, lenient);
    outcome.miss_tag = lenient_hit ? kMissStrictEventMatching : kMissUnsupportedConstruct;
  }
  return outcome;
}

std::map<std::string, RecoveryTally> TallyRecovery(
    const std::vector<RecoveryOutcome>& outcomes) {
  std::map<std::string, RecoveryTally> tally;
  for (const RecoveryOutcome& o : outcomes) {
    RecoveryTally& t = tally[o.op];
    ++t.total;
    if (o.recovered) {
      ++t.recovered;
    } else {
      ++t.misses_by_tag[o.miss_tag];
    }
  }
  return tally;
}

}  // namespace ritscan
