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

#include "support/report_fixtures.h"

#include "absl/strings/str_cat.h"
#include "ritscan/hybrid.h"

namespace ritscan::testing {

FindingReport WateringWacReport() {
  Finding f;
  f.category = ThreatCategory::kWAC;
  f.rule_a = {"r1", "1 Watering_garden_startup"};
  f.rule_b = {"r7", "7 Watering_starting/stoping"};
  f.source_id = "r1a1";
  f.target_ids = {"r7a7"};
  f.trigger_pairs = {{"r1t1", "r7t1"}};
  f.triggers_a = {{"r1t1", "System started"}};
  f.triggers_b = {{"r7t1", "Item notification_proxy_wtr received update"}};
  f.conditions_b = {{"r7c8", "msg == \"START\""}, {"r7c9", "wtrfronttime > 0"}};
  f.action_a = {"r1a1", "wtrvalvefront.sendCommand(off_r)"};
  f.targets_b = {{"r7a7", "wtrvalvefront.sendCommand(on_r)"}};
  f.description = ThreatDescription(CoarseCategory::kAC);
  FindingReport report;
  report.file = "detect-output\\oh-rules\\WateringSystem.rules";
  report.findings.push_back(f);
  return report;
}

PrecisionFixture SeededPrecisionFixture() {
  struct Row {
    ThreatCategory category;
    int tp;
    int fp;
  };
  const Row rows[] = {{ThreatCategory::kWAC, 25, 15}, {ThreatCategory::kSAC, 18, 2},
                      {ThreatCategory::kWTC, 5, 7},   {ThreatCategory::kSTC, 4, 1},
                      {ThreatCategory::kWCC, 6, 0},   {ThreatCategory::kSCC, 8, 0}};
  PrecisionFixture fx;
  fx.report.file = "precision.rules";
  int n = 0;
  for (const Row& row : rows) {
    for (int i = 0; i < row.tp + row.fp; ++i) {
      ++n;
      Finding f;
      f.category = row.category;
      f.rule_a = {absl::StrCat("r", n), absl::StrCat("Rule ", n)};
      f.rule_b = {absl::StrCat("r", n + 100), absl::StrCat("Rule ", n + 100)};
      f.source_id = absl::StrCat("r", n, "a1");
      f.target_ids = {absl::StrCat("r", n + 100, "a1")};
      f.description = ThreatDescription(Aggregate(row.category));
      bool tp = i < row.tp;
      fx.truth[FindingId(fx.report.file, f)] = tp;
      for (SubtaskKind kind : SubtasksFor(Aggregate(row.category))) {
        fx.oracle_answers[absl::StrCat(SubtaskName(kind), "|", f.Key())] = tp ? "YES" : "NO";
      }
      fx.report.findings.push_back(std::move(f));
    }
  }
  return fx;
}

}  // namespace ritscan::testing
