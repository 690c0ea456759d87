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

// Adjudication pipeline: routes detector findings, asks a backend to check
// the routed ones through independent yes/no subtasks, and assembles the
// final report from pass-through and confirmed findings.

#ifndef RITSCAN_HYBRID_H_
#define RITSCAN_HYBRID_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ritscan/detector.h"
#include "ritscan/model_client.h"
#include "ritscan/prompts.h"
#include "ritscan/rule_ir.h"
#include "ritscan/source.h"

namespace ritscan {

using RoutedSet = std::set<ThreatCategory>;

// {WAC, WTC}
RoutedSet DefaultRoutedSet();

enum class Route { kPassThrough, kNeedsAdjudication };

struct RoutingDecision {
  size_t finding_index = 0;
  Route route = Route::kPassThrough;
};

RoutingDecision RouteFinding(const Finding& finding, size_t finding_index,
                             const RoutedSet& routed);

enum class SubtaskKind { kTriggerOverlap, kCascadeSafety, kActionConflict };

const char* SubtaskName(SubtaskKind kind);  // "trigger-overlap", ...

// AC: trigger overlap and action conflict. TC: cascade safety. CC: trigger
// overlap.
std::vector<SubtaskKind> SubtasksFor(CoarseCategory family);

// Source text of every rule by id, used to give the backend full context.
using RuleTexts = std::map<std::string, std::string>;
RuleTexts CollectRuleTexts(const SourceFile& source, const RuleSet& rules);

struct AdjudicationSubtask {
  SubtaskKind kind = SubtaskKind::kTriggerOverlap;
  std::string prompt;
};

std::vector<AdjudicationSubtask> BuildSubtasks(const Finding& finding,
                                               const RuleTexts& texts);

// YES or NO from the last line that contains either word.
std::optional<bool> ParseYesNo(std::string_view text);

enum class Decision { kConfirmed, kDiscarded };

const char* DecisionName(Decision decision);

struct SubtaskAnswer {
  SubtaskKind kind = SubtaskKind::kTriggerOverlap;
  std::string raw_response;
  std::optional<bool> upheld;  // unset when the answer was unusable
  CallRecord record;
};

struct Verdict {
  size_t finding_index = 0;
  std::string finding_key;
  Decision decision = Decision::kConfirmed;
  std::string rationale;
  std::vector<SubtaskAnswer> answers;
};

struct Adjudication {
  std::optional<Verdict> verdict;  // withheld when the backend failed
  std::string failure;             // cause when withheld
  std::vector<SubtaskAnswer> answers;
};

// Confirmed iff every subtask upholds the threat. Backend exhaustion or an
// unusable answer withholds the verdict. Errors are backend configuration
// problems.
absl::StatusOr<Adjudication> Adjudicate(const Finding& finding, size_t finding_index,
                                        const std::vector<AdjudicationSubtask>& subtasks,
                                        Backend& backend);

inline constexpr char kFlagAdjudicationUnavailable[] = "adjudication-unavailable";

struct Reconciled {
  FindingReport final_report;
  std::vector<Finding> discarded;
};

// Keeps pass-through findings, confirmed findings and (flagged) findings
// without a verdict, in input order.
Reconciled Reconcile(const FindingReport& input, const std::vector<Verdict>& verdicts,
                     const RoutedSet& routed);

struct AuditRecord {
  size_t finding_index = 0;
  std::string finding_key;
  std::string subtask;
  std::string request_id;
  int attempts = 0;
  std::string raw_response;
  std::optional<bool> upheld;
  std::string outcome;  // "Confirmed", "Discarded" or the withheld cause
};

std::string AuditRecordJson(const AuditRecord& record);

struct HybridOptions {
  RoutedSet routed = DefaultRoutedSet();
  int max_in_flight = 4;
};

struct HybridOutcome {
  Reconciled reconciled;
  std::vector<Verdict> verdicts;
  std::vector<size_t> fail_open;  // finding indices
  std::vector<AuditRecord> audit;
  int routed = 0;
};

absl::StatusOr<HybridOutcome> RunHybrid(const FindingReport& report, const RuleTexts& texts,
                                        const HybridOptions& options, Backend& backend);

struct NegativeRecovery {
  LabelSet labels;
  std::string raw_response;
  CallRecord record;
};

// Blind classification of a ruleset without detector evidence.
absl::StatusOr<NegativeRecovery> RecoverNegatives(std::string_view ruleset_text,
                                                  const PromptTemplate& tmpl,
                                                  Backend& backend,
                                                  const std::string& instance_id);

}  // namespace ritscan

#endif  // RITSCAN_HYBRID_H_
