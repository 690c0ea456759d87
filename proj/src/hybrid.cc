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

#include "ritscan/hybrid.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "ritscan/prompt_assets.h"

namespace ritscan {
namespace {

std::string EvidenceLines(const std::vector<Evidence>& items) {
  if (items.empty()) return "(none)";
  std::vector<std::string> lines;
  for (const Evidence& e : items) lines.push_back(absl::StrCat("[", e.id, "] ", e.text));
  return absl::StrJoin(lines, "\n");
}

std::string RuleText(const RuleTexts& texts, const RuleRef& rule) {
  auto it = texts.find(rule.id);
  if (it != texts.end()) return it->second;
  return absl::StrCat("rule \"", rule.name, "\" (source unavailable)");
}

const char* SubtaskAsset(SubtaskKind kind) {
  switch (kind) {
    case SubtaskKind::kTriggerOverlap:
      return assets::k_subtask_trigger_overlap;
    case SubtaskKind::kCascadeSafety:
      return assets::k_subtask_cascade_safety;
    case SubtaskKind::kActionConflict:
      return assets::k_subtask_action_conflict;
  }
  return assets::k_subtask_trigger_overlap;
}

// Lines before the decision line of a response.
std::string Rationale(const std::string& raw) {
  std::string text(absl::StripAsciiWhitespace(raw));
  size_t last = text.rfind('\n');
  if (last == std::string::npos) return "";
  return std::string(absl::StripAsciiWhitespace(text.substr(0, last)));
}

}  // namespace

RoutedSet DefaultRoutedSet() { return {ThreatCategory::kWAC, ThreatCategory::kWTC}; }

RoutingDecision RouteFinding(const Finding& finding, size_t finding_index,
                             const RoutedSet& routed) {
  return {finding_index, routed.count(finding.category) ? Route::kNeedsAdjudication
                                                        : Route::kPassThrough};
}

const char* SubtaskName(SubtaskKind kind) {
  switch (kind) {
    case SubtaskKind::kTriggerOverlap:
      return "trigger-overlap";
    case SubtaskKind::kCascadeSafety:
      return "cascade-safety";
    case SubtaskKind::kActionConflict:
      return "action-conflict";
  }
  return "trigger-overlap";
}

std::vector<SubtaskKind> SubtasksFor(CoarseCategory family) {
  switch (family) {
    case CoarseCategory::kAC:
      return {SubtaskKind::kTriggerOverlap, SubtaskKind::kActionConflict};
    case CoarseCategory::kTC:
      return {SubtaskKind::kCascadeSafety};
    case CoarseCategory::kCC:
      return {SubtaskKind::kTriggerOverlap};
  }
  return {};
}

RuleTexts CollectRuleTexts(const SourceFile& source, const RuleSet& rules) {
  RuleTexts texts;
  for (const Rule& rule : rules.rules) texts[rule.id] = std::string(source.Text(rule.span));
  return texts;
}

std::vector<AdjudicationSubtask> BuildSubtasks(const Finding& finding,
                                               const RuleTexts& texts) {
  std::vector<AdjudicationSubtask> out;
  for (SubtaskKind kind : SubtasksFor(Aggregate(finding.category))) {
    std::string prompt = absl::StrReplaceAll(
        SubtaskAsset(kind), {{"{{CATEGORY}}", CategoryName(finding.category)},
                             {"{{TRIGGERS_A}}", EvidenceLines(finding.triggers_a)},
                             {"{{TRIGGERS_B}}", EvidenceLines(finding.triggers_b)},
                             {"{{ACTION_A}}", EvidenceLines({finding.action_a})},
                             {"{{TARGETS_B}}", EvidenceLines(finding.targets_b)},
                             {"{{RULE_A}}", RuleText(texts, finding.rule_a)},
                             {"{{RULE_B}}", RuleText(texts, finding.rule_b)}});
    out.push_back({kind, std::move(prompt)});
  }
  return out;
}

std::optional<bool> ParseYesNo(std::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n');
  for (auto line = lines.rbegin(); line != lines.rend(); ++line) {
    std::optional<bool> answer;
    for (absl::string_view word :
         absl::StrSplit(*line, absl::ByAnyChar(" \t\r,;:.!?()[]{}\"'`*"), absl::SkipEmpty())) {
      std::string upper = absl::AsciiStrToUpper(std::string(word));
      if (upper == "YES") answer = true;
      if (upper == "NO") answer = false;
    }
    if (answer) return answer;
  }
  return std::nullopt;
}

const char* DecisionName(Decision decision) {
  return decision == Decision::kConfirmed ? "Confirmed" : "Discarded";
}

absl::StatusOr<Adjudication> Adjudicate(const Finding& finding, size_t finding_index,
                                        const std::vector<AdjudicationSubtask>& subtasks,
                                        Backend& backend) {
  Adjudication result;
  for (const AdjudicationSubtask& subtask : subtasks) {
    BackendRequest request{subtask.prompt, SubtaskName(subtask.kind), finding.Key()};
    auto completion = backend.Complete(request);
    if (!completion.ok()) return completion.status();
    SubtaskAnswer answer;
    answer.kind = subtask.kind;
    answer.raw_response = completion->text;
    answer.record = completion->record;
    if (completion->ok()) answer.upheld = ParseYesNo(completion->text);
    if (result.failure.empty()) {
      if (!completion->ok()) {
        result.failure = absl::StrCat("backend-exhausted:",
                                      FailureClassName(*completion->record.exhausted));
      } else if (!answer.upheld) {
        result.failure = "unusable-answer";
      }
    }
    result.answers.push_back(std::move(answer));
  }
  if (!result.failure.empty()) return result;

  Verdict verdict;
  verdict.finding_index = finding_index;
  verdict.finding_key = finding.Key();
  verdict.decision = Decision::kConfirmed;
  for (const SubtaskAnswer& answer : result.answers) {
    if (!*answer.upheld) {
      verdict.decision = Decision::kDiscarded;
      verdict.rationale = Rationale(answer.raw_response);
      break;
    }
  }
  verdict.answers = result.answers;
  result.verdict = std::move(verdict);
  return result;
}

Reconciled Reconcile(const FindingReport& input, const std::vector<Verdict>& verdicts,
                     const RoutedSet& routed) {
  std::map<size_t, const Verdict*> by_index;
  for (const Verdict& v : verdicts) by_index[v.finding_index] = &v;
  Reconciled out;
  out.final_report.file = input.file;
  for (size_t i = 0; i < input.findings.size(); ++i) {
    const Finding& f = input.findings[i];
    if (RouteFinding(f, i, routed).route == Route::kPassThrough) {
      out.final_report.findings.push_back(f);
      continue;
    }
    auto it = by_index.find(i);
    if (it == by_index.end()) {
      Finding flagged = f;
      flagged.flags.push_back(kFlagAdjudicationUnavailable);
      out.final_report.findings.push_back(std::move(flagged));
    } else if (it->second->decision == Decision::kConfirmed) {
      out.final_report.findings.push_back(f);
    } else {
      out.discarded.push_back(f);
    }
  }
  return out;
}

std::string AuditRecordJson(const AuditRecord& record) {
  nlohmann::ordered_json j{{"finding_index", record.finding_index},
                           {"finding_key", record.finding_key},
                           {"subtask", record.subtask},
                           {"request_id", record.request_id},
                           {"attempts", record.attempts},
                           {"raw_response", record.raw_response}};
  j["upheld"] = record.upheld ? nlohmann::ordered_json(*record.upheld) : nullptr;
  j["outcome"] = record.outcome;
  return j.dump();
}

absl::StatusOr<HybridOutcome> RunHybrid(const FindingReport& report, const RuleTexts& texts,
                                        const HybridOptions& options, Backend& backend) {
  std::vector<size_t> routed;
  for (size_t i = 0; i < report.findings.size(); ++i) {
    if (RouteFinding(report.findings[i], i, options.routed).route ==
        Route::kNeedsAdjudication) {
      routed.push_back(i);
    }
  }
  std::vector<std::optional<absl::StatusOr<Adjudication>>> results(routed.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < routed.size(); k = next++) {
      const Finding& f = report.findings[routed[k]];
      results[k] = Adjudicate(f, routed[k], BuildSubtasks(f, texts), backend);
    }
  };
  size_t threads = std::min<size_t>(std::max(1, options.max_in_flight), routed.size());
  std::vector<std::thread> pool;
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  if (threads > 0) worker();
  for (std::thread& t : pool) t.join();

  HybridOutcome out;
  out.routed = static_cast<int>(routed.size());
  for (size_t k = 0; k < routed.size(); ++k) {
    if (!results[k]->ok()) return results[k]->status();
    const Adjudication& a = **results[k];
    const Finding& f = report.findings[routed[k]];
    std::string outcome = a.verdict ? DecisionName(a.verdict->decision) : a.failure;
    for (const SubtaskAnswer& answer : a.answers) {
      out.audit.push_back({routed[k], f.Key(), SubtaskName(answer.kind),
                           answer.record.request_id,
                           static_cast<int>(answer.record.attempts.size()),
                           answer.raw_response, answer.upheld, outcome});
    }
    if (a.verdict) {
      out.verdicts.push_back(*a.verdict);
    } else {
      out.fail_open.push_back(routed[k]);
    }
  }
  out.reconciled = Reconcile(report, out.verdicts, options.routed);
  return out;
}

absl::StatusOr<NegativeRecovery> RecoverNegatives(std::string_view ruleset_text,
                                                  const PromptTemplate& tmpl,
                                                  Backend& backend,
                                                  const std::string& instance_id) {
  auto prompt = BuildPrompt(tmpl, ruleset_text);
  if (!prompt.ok()) return prompt.status();
  auto completion = backend.Complete({*std::move(prompt), "classify", instance_id});
  if (!completion.ok()) return completion.status();
  NegativeRecovery out;
  out.raw_response = completion->text;
  out.record = completion->record;
  out.labels = ParseModelResponse(completion->text, tmpl.taxonomy, tmpl.multi_response);
  return out;
}

}  // namespace ritscan
