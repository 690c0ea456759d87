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

// Pairwise threat classification over a parsed rules file.

#ifndef RITSCAN_DETECTOR_H_
#define RITSCAN_DETECTOR_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ritscan/rule_ir.h"

namespace ritscan {

enum class ThreatCategory { kWAC, kSAC, kWTC, kSTC, kWCC, kSCC };
enum class CoarseCategory { kAC, kTC, kCC };

inline constexpr std::array<ThreatCategory, 6> kAllCategories = {
    ThreatCategory::kWAC, ThreatCategory::kSAC, ThreatCategory::kWTC,
    ThreatCategory::kSTC, ThreatCategory::kWCC, ThreatCategory::kSCC};
inline constexpr std::array<CoarseCategory, 3> kAllCoarse = {
    CoarseCategory::kAC, CoarseCategory::kTC, CoarseCategory::kCC};

CoarseCategory Aggregate(ThreatCategory fine);
bool IsStrong(ThreatCategory fine);
const char* CategoryName(ThreatCategory fine);
const char* CoarseName(CoarseCategory coarse);
// Case-insensitive.
std::optional<ThreatCategory> ParseCategory(std::string_view text);
std::optional<CoarseCategory> ParseCoarse(std::string_view text);

// An element of the source file cited by a finding.
struct Evidence {
  std::string id;
  std::string text;

  bool operator==(const Evidence&) const = default;
};

struct RuleRef {
  std::string id;
  std::string name;

  bool operator==(const RuleRef&) const = default;
};

// One threat instance. Rule A is the side whose action starts the
// interaction; for contradictions it is the rule that comes first.
//
//   family  source_id     target_ids                  targets_b
//   AC      action of A   {action of B}               that action
//   TC      action of A   {trigger of B}              that trigger
//   CC      action of A   guard ids of B's action(s)  guards A enables
struct Finding {
  ThreatCategory category = ThreatCategory::kWAC;
  RuleRef rule_a;
  RuleRef rule_b;
  std::string source_id;
  std::vector<std::string> target_ids;
  std::vector<std::pair<std::string, std::string>> trigger_pairs;
  std::vector<Evidence> triggers_a;
  std::vector<Evidence> triggers_b;
  std::vector<Evidence> conditions_a;
  std::vector<Evidence> conditions_b;
  Evidence action_a;
  std::vector<Evidence> targets_b;
  std::string description;
  // Annotations added after detection, e.g. by the adjudication pipeline.
  std::vector<std::string> flags;

  // Unique within a file, e.g. "WAC:r1a1>r7a7".
  std::string Key() const;

  bool operator==(const Finding&) const = default;
};

struct CategoryCounts {
  std::array<int, 6> fine{};

  int Of(ThreatCategory c) const { return fine[static_cast<size_t>(c)]; }
  int Of(CoarseCategory c) const;
  int Total() const;

  bool operator==(const CategoryCounts&) const = default;
};

struct FindingReport {
  std::string file;
  std::vector<Finding> findings;

  CategoryCounts Counts() const;

  bool operator==(const FindingReport&) const = default;
};

struct DetectorConfig {
  // A postUpdate only fires `received command` triggers when false.
  bool strict_event_matching = true;
};

// Fixed description text per family.
const char* ThreatDescription(CoarseCategory family);

std::vector<Finding> ClassifyActionContradiction(const Rule& a, const Rule& b);
std::vector<Finding> ClassifyTriggerCascade(const Rule& a, const Rule& b,
                                            bool strict);
std::vector<Finding> ClassifyConditionCascade(const Rule& a, const Rule& b);

// All findings of the pair in the order: contradictions, cascades a->b,
// cascades b->a, condition cascades a->b, condition cascades b->a. A
// contradiction between two actions is dropped when one of them enables the
// other's guards; the condition cascade already covers it.
std::vector<Finding> DetectPair(const Rule& a, const Rule& b,
                                const DetectorConfig& config);

FindingReport DetectFile(const RuleSet& rules, const DetectorConfig& config);

}  // namespace ritscan

#endif  // RITSCAN_DETECTOR_H_
