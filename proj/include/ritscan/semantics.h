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

// Semantic relations between rule elements. Everything here is a pure
// function of its arguments.

#ifndef RITSCAN_SEMANTICS_H_
#define RITSCAN_SEMANTICS_H_

#include <optional>
#include <string>
#include <vector>

#include "ritscan/rule_ir.h"
#include "ritscan/value.h"

namespace ritscan {

enum class OverlapReason {
  kSameEvent,
  kConservativeDefault,
  kProvenDisjointCron,
  kProvenDisjointState,
  // Reserved for window-shaped triggers; no trigger form yields it today.
  kProvenDisjointTimeWindow,
};

const char* OverlapReasonName(OverlapReason reason);

struct OverlapVerdict {
  bool overlap = true;
  OverlapReason reason = OverlapReason::kConservativeDefault;

  bool operator==(const OverlapVerdict&) const = default;
};

// Overlap unless one of three disjointness proofs applies: two crons with
// fixed, unequal minute/hour; `changed to` on one item with unequal targets;
// state comparisons on one item with an empty intersection.
OverlapVerdict TriggersOverlap(const Trigger& a, const Trigger& b);

// Satisfiability of a conjunction. Items are independent; numeric
// comparisons are solved as intervals over the rationals, equalities over
// discrete values assume an unbounded supply of other values, and all time
// windows must share a minute.
bool Satisfiable(const std::vector<Condition>& conditions);
bool ConditionsOverlap(const std::vector<Condition>& a,
                       const std::vector<Condition>& b);

bool ValueConflicts(const Value& a, const Value& b);
bool ActionsContradict(const Action& a, const Action& b);

// Whether executing `a` fires trigger `t`. A postUpdate only fires a
// `received command` trigger when `strict` is false.
bool ActionMatchesTrigger(const Action& a, const Trigger& t, bool strict);

// Whether the value written by `a` makes `c` true. Time windows are never
// enabled by actions.
bool ActionEnablesCondition(const Action& a, const Condition& c);

// Parses the minute and hour of a cron expression when both are plain
// numbers. Five fields are read as `min hour ...`, six or more as
// `sec min hour ...`.
struct CronInstant {
  int hour = 0;
  int minute = 0;
  bool operator==(const CronInstant&) const = default;
};
std::optional<CronInstant> FixedCronInstant(const std::string& cron);

}  // namespace ritscan

#endif  // RITSCAN_SEMANTICS_H_
