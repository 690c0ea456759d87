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

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "support/builders.h"

namespace ritscan {
namespace {

using namespace ::ritscan::testing;  // NOLINT

TEST(TriggersOverlapTest, CronAgainstStateComparisonIsConservative) {
  EXPECT_EQ(TriggersOverlap(Cron("0 00 18 * * ?"),
                            StateIs("Temperature", CompareOp::kGe, "25")),
            (OverlapVerdict{true, OverlapReason::kConservativeDefault}));
}

TEST(TriggersOverlapTest, DistinctFixedCronsAreDisjoint) {
  EXPECT_EQ(TriggersOverlap(Cron("0 30 08 * * ?"), Cron("0 30 22 * * ?")),
            (OverlapVerdict{false, OverlapReason::kProvenDisjointCron}));
}

TEST(TriggersOverlapTest, ChangedToDifferentValuesIsDisjoint) {
  EXPECT_EQ(TriggersOverlap(Changed("Foyer_Light", "ON"),
                            Changed("Foyer_Light", "OFF")),
            (OverlapVerdict{false, OverlapReason::kProvenDisjointState}));
}

TEST(TriggersOverlapTest, SameEvent) {
  EXPECT_EQ(TriggersOverlap(Changed("X", "ON"), Changed("X", "on")).reason,
            OverlapReason::kSameEvent);
  EXPECT_EQ(TriggersOverlap(Started(), Started()).reason,
            OverlapReason::kSameEvent);
}

TEST(TriggersOverlapTest, CronFieldForms) {
  // Five-field crons carry minute and hour first.
  EXPECT_FALSE(TriggersOverlap(Cron("30 8 * * *"), Cron("30 9 * * *")).overlap);
  EXPECT_TRUE(TriggersOverlap(Cron("0 0 8 * * ?"), Cron("0 00 08 * * ?")).overlap);
  EXPECT_TRUE(TriggersOverlap(Cron("0 0/5 8 * * ?"), Cron("0 10 8 * * ?")).overlap);
  EXPECT_TRUE(TriggersOverlap(Cron("0 0 8 * * MON"), Cron("0 0 8 * * TUE")).overlap);
}

TEST(TriggersOverlapTest, StateComparisonIntervals) {
  EXPECT_FALSE(TriggersOverlap(StateIs("T", CompareOp::kGt, "30"),
                               StateIs("T", CompareOp::kLt, "10"))
                   .overlap);
  EXPECT_TRUE(TriggersOverlap(StateIs("T", CompareOp::kGe, "30"),
                              StateIs("T", CompareOp::kLe, "30"))
                  .overlap);
  EXPECT_TRUE(TriggersOverlap(StateIs("T", CompareOp::kGt, "30"),
                              StateIs("U", CompareOp::kLt, "10"))
                  .overlap);
}

TEST(ConditionsOverlapTest, Examples) {
  EXPECT_FALSE(ConditionsOverlap({Cond("x", CompareOp::kEq, "ON")},
                                 {Cond("x", CompareOp::kEq, "OFF")}));
  EXPECT_TRUE(ConditionsOverlap({Cond("temp", CompareOp::kGe, "57")},
                                {Cond("temp", CompareOp::kGe, "25")}));
  EXPECT_TRUE(ConditionsOverlap({}, {Cond("x", CompareOp::kEq, "ON")}));
}

TEST(ConditionsOverlapTest, SolverCases) {
  using C = CompareOp;
  EXPECT_FALSE(Satisfiable({Cond("x", C::kGt, "5"), Cond("x", C::kLe, "5")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kGe, "5"), Cond("x", C::kLe, "5")}));
  EXPECT_FALSE(Satisfiable({Cond("x", C::kGe, "5"), Cond("x", C::kLe, "5"),
                            Cond("x", C::kNe, "5.0")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kGt, "5"), Cond("x", C::kLt, "5.001"),
                           Cond("x", C::kNe, "5.0005")}));
  EXPECT_FALSE(Satisfiable({Cond("x", C::kGt, "ON")}));
  EXPECT_FALSE(Satisfiable({Cond("x", C::kGt, "1"), Cond("x", C::kEq, "ON")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kGt, "1"), Cond("x", C::kNe, "ON")}));
  EXPECT_FALSE(Satisfiable({Cond("x", C::kEq, "ON"), Cond("x", C::kNe, "ON")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kNe, "ON"), Cond("x", C::kNe, "OFF")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kEq, "ON"), Cond("y", C::kEq, "OFF")}));
  EXPECT_FALSE(Satisfiable({Cond("x", C::kEq, "3"), Cond("x", C::kGt, "3")}));
  EXPECT_TRUE(Satisfiable({Cond("x", C::kEq, "3"), Cond("x", C::kGe, "3.0")}));
  EXPECT_FALSE(Satisfiable({Window(480, 540), Window(600, 700)}));
  EXPECT_TRUE(Satisfiable({Window(480, 540), Window(540, 700)}));
}

TEST(ActionsContradictTest, Examples) {
  EXPECT_TRUE(ActionsContradict(Send("Window_Lock", "ON"),
                                Send("Window_Lock", "OFF")));
  EXPECT_TRUE(ActionsContradict(Send("wtrvalvefront", "off_r"),
                                Send("wtrvalvefront", "on_r")));
  EXPECT_FALSE(ActionsContradict(Send("Kitchen_Light", "ON"),
                                 Send("Foyer_Light", "OFF")));
}

TEST(ValueConflictsTest, Examples) {
  EXPECT_TRUE(ValueConflicts(V("ON"), V("OFF")));
  EXPECT_FALSE(ValueConflicts(V("ON"), V("ON")));
  EXPECT_TRUE(ValueConflicts(V("20"), V("25")));
  EXPECT_FALSE(ValueConflicts(V("CLOSE"), V("closed")));
  EXPECT_FALSE(ValueConflicts(V("2.50"), V("2.5")));
}

TEST(ActionMatchesTriggerTest, Examples) {
  EXPECT_TRUE(ActionMatchesTrigger(Send("Foyer_Light", "ON"),
                                   Changed("Foyer_Light", "ON"), true));
  EXPECT_FALSE(ActionMatchesTrigger(Post("X", "ON"), Command("X"), true));
  EXPECT_TRUE(ActionMatchesTrigger(Post("X", "ON"), Command("X"), false));
  EXPECT_FALSE(ActionMatchesTrigger(Send("X", "ON"), Changed("Y", "ON"), true));
}

TEST(ActionMatchesTriggerTest, Table) {
  EXPECT_TRUE(ActionMatchesTrigger(Send("X", "ON"), Command("X", "ON"), true));
  EXPECT_FALSE(ActionMatchesTrigger(Send("X", "ON"), Command("X", "OFF"), true));
  EXPECT_TRUE(ActionMatchesTrigger(Send("X", "ON"), Update("X"), true));
  EXPECT_TRUE(ActionMatchesTrigger(Post("X", "ON"), Update("X"), true));
  EXPECT_TRUE(ActionMatchesTrigger(Send("X", "ON"), Changed("X"), true));
  EXPECT_TRUE(
      ActionMatchesTrigger(Send("X", "ON"), Changed("X", "ON", "ON"), true));
  EXPECT_FALSE(ActionMatchesTrigger(Post("X", "ON"), Changed("X", "OFF"), true));
  EXPECT_FALSE(ActionMatchesTrigger(
      Send("X", "30"), StateIs("X", CompareOp::kGe, "25"), false));
  EXPECT_FALSE(ActionMatchesTrigger(Send("X", "ON"), Started(), false));
}

TEST(ActionEnablesConditionTest, Examples) {
  EXPECT_TRUE(ActionEnablesCondition(Send("window_Lock", "OFF"),
                                     Cond("window_Lock", CompareOp::kEq, "OFF")));
  EXPECT_FALSE(ActionEnablesCondition(Send("window_Lock", "ON"),
                                      Cond("window_Lock", CompareOp::kEq, "OFF")));
  EXPECT_TRUE(ActionEnablesCondition(Send("temperature", "60"),
                                     Cond("temperature", CompareOp::kGe, "57")));
  Condition window = Window(0, 1439);
  window.item = "X";
  EXPECT_FALSE(ActionEnablesCondition(Send("X", "ON"), window));
}

// Randomized properties over a small vocabulary.

class Generator {
 public:
  explicit Generator(uint32_t seed) : rng_(seed) {}

  std::string Pick(const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng_)];
  }
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  CompareOp Op() { return static_cast<CompareOp>(Int(0, 5)); }
  std::string Item() { return Pick({"A", "B", "C"}); }
  std::string Val() { return Pick({"ON", "OFF", "1", "2", "2.5", "x_r"}); }

  Trigger Trig() {
    switch (Int(0, 5)) {
      case 0:
        return Changed(Item(), Int(0, 2) ? std::optional<std::string>(Val())
                                         : std::nullopt);
      case 1:
        return Command(Item(), Int(0, 1) ? std::optional<std::string>(Val())
                                         : std::nullopt);
      case 2:
        return Update(Item());
      case 3:
        return Cron(Pick({"0 0 8 * * ?", "0 30 8 * * ?", "0 0 22 * * ?",
                          "0 0/5 * * * ?", "15 8 * * *"}));
      case 4:
        return Started();
      default:
        return StateIs(Item(), Op(), Pick({"1", "2", "2.5"}));
    }
  }
  Condition Cnd() {
    if (Int(0, 4) == 0) {
      int a = Int(0, 1439);
      int b = Int(a, 1439);
      return Window(a, b);
    }
    return Cond(Item(), Op(), Val());
  }
  std::vector<Condition> Conds(int max) {
    std::vector<Condition> out;
    int n = Int(0, max);
    for (int i = 0; i < n; ++i) out.push_back(Cnd());
    return out;
  }
  Action Act() { return Int(0, 1) ? Send(Item(), Val()) : Post(Item(), Val()); }

 private:
  std::mt19937 rng_;
};

// Does cron field `field` admit `v`? Only plain numbers and `*`-like fields
// are treated as restrictive.
bool CronFieldAdmits(const std::string& field, int v) {
  for (char c : field) {
    if (c < '0' || c > '9') return true;
  }
  return std::stoi(field) == v;
}

bool CronFiresAt(const std::string& cron, int hour, int minute) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : cron + " ") {
    if (c == ' ') {
      if (!cur.empty()) f.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  size_t m = f.size() == 5 ? 0 : 1;
  return CronFieldAdmits(f[m], minute) && CronFieldAdmits(f[m + 1], hour);
}

// Independent witness search for two triggers firing together.
bool WitnessExists(const Trigger& a, const Trigger& b) {
  if (a.kind == TriggerKind::kCron && b.kind == TriggerKind::kCron) {
    for (int h = 0; h < 24; ++h) {
      for (int m = 0; m < 60; ++m) {
        if (CronFiresAt(a.cron, h, m) && CronFiresAt(b.cron, h, m)) return true;
      }
    }
    return false;
  }
  if (a.kind == TriggerKind::kItemChanged &&
      b.kind == TriggerKind::kItemChanged && a.item == b.item) {
    std::vector<Value> states = {V("ON"), V("OFF"), V("1"), V("2"), V("2.5"),
                                 V("x_r"), V("fresh_state")};
    for (const Value& s : states) {
      bool fa = !a.to_value || a.to_value->Equivalent(s);
      bool fb = !b.to_value || b.to_value->Equivalent(s);
      if (fa && fb) return true;
    }
    return false;
  }
  if (a.kind == TriggerKind::kStateComparison &&
      b.kind == TriggerKind::kStateComparison && a.item == b.item) {
    for (int tenths = -10; tenths <= 40; ++tenths) {
      Value s = Value::Number(Decimal(tenths, 1));
      if (EvaluateComparison(s, a.comparison->op, a.comparison->value) &&
          EvaluateComparison(s, b.comparison->op, b.comparison->value)) {
        return true;
      }
    }
    for (const Value& s : {V("ON"), V("fresh_state")}) {
      if (EvaluateComparison(s, a.comparison->op, a.comparison->value) &&
          EvaluateComparison(s, b.comparison->op, b.comparison->value)) {
        return true;
      }
    }
    return false;
  }
  return true;
}

TEST(SemanticsPropertyTest, TriggerOverlapSymmetricReflexiveSound) {
  Generator gen(101);
  for (int i = 0; i < 5000; ++i) {
    Trigger a = gen.Trig();
    Trigger b = gen.Trig();
    OverlapVerdict ab = TriggersOverlap(a, b);
    EXPECT_EQ(ab, TriggersOverlap(b, a));
    EXPECT_TRUE(TriggersOverlap(a, a).overlap);
    if (!ab.overlap) {
      EXPECT_NE(ab.reason, OverlapReason::kSameEvent);
      EXPECT_NE(ab.reason, OverlapReason::kConservativeDefault);
      EXPECT_FALSE(WitnessExists(a, b)) << a.cron << " / " << b.cron;
    }
  }
}

TEST(SemanticsPropertyTest, ContradictionSymmetricIrreflexive) {
  Generator gen(202);
  for (int i = 0; i < 5000; ++i) {
    Action a = gen.Act();
    Action b = gen.Act();
    EXPECT_EQ(ActionsContradict(a, b), ActionsContradict(b, a));
    EXPECT_FALSE(ActionsContradict(a, a));
    EXPECT_EQ(ValueConflicts(a.value, b.value), ValueConflicts(b.value, a.value));
    EXPECT_FALSE(ValueConflicts(a.value, a.value));
  }
}

TEST(SemanticsPropertyTest, ConditionOverlapMonotone) {
  Generator gen(303);
  for (int i = 0; i < 5000; ++i) {
    std::vector<Condition> a = gen.Conds(3);
    std::vector<Condition> b = gen.Conds(3);
    if (!ConditionsOverlap(a, b)) continue;
    for (size_t k = 0; k < a.size(); ++k) {
      std::vector<Condition> smaller = a;
      smaller.erase(smaller.begin() + static_cast<long>(k));
      EXPECT_TRUE(ConditionsOverlap(smaller, b));
      EXPECT_TRUE(ConditionsOverlap(b, smaller));
    }
  }
}

// A brute-force check of the solver over a finite domain that is rich
// enough for the generated constants.
TEST(SemanticsPropertyTest, SolverAgreesWithEnumeration) {
  Generator gen(404);
  std::vector<Value> domain = {V("ON"), V("OFF"), V("x_r"), V("fresh_atom")};
  for (int tenths = -10; tenths <= 40; tenths += 1) {
    domain.push_back(Value::Number(Decimal(tenths, 1)));
  }
  domain.push_back(Value::Number(Decimal(225, 2)));
  domain.push_back(Value::Number(Decimal(275, 2)));
  for (int i = 0; i < 3000; ++i) {
    std::vector<Condition> conds;
    int n = gen.Int(1, 4);
    for (int k = 0; k < n; ++k) conds.push_back(Cond("A", gen.Op(), gen.Val()));
    bool witness = false;
    for (const Value& s : domain) {
      bool all = true;
      for (const Condition& c : conds) all = all && EvaluateComparison(s, c.op, c.value);
      witness = witness || all;
    }
    EXPECT_EQ(Satisfiable(conds), witness);
  }
}

TEST(SemanticsPropertyTest, EnablementImpliesOverlap) {
  Generator gen(505);
  for (int i = 0; i < 5000; ++i) {
    Action a = gen.Act();
    Condition c = gen.Cnd();
    if (!ActionEnablesCondition(a, c)) continue;
    EXPECT_TRUE(
        ConditionsOverlap({c}, {Cond(a.item, CompareOp::kEq, a.value.canonical())}));
  }
}

}  // namespace
}  // namespace ritscan
