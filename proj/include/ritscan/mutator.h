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

// Source-to-source operators that inject one threat into a benign rules
// file, plus corpus generation over a set of seed files.
//
// Every operator edits only the text of the two rules it was given: it
// appends statements before `end`, wraps an existing action in an `if`,
// replaces a trigger clause (keeping the rule-level conditions) or adds a
// guard. Each operator has an ordered list of strategies, from reuse of the
// file's own items and conditions to fresh `Mut_*` items. A strategy is
// accepted when the mutant parses without errors and the detector finds no
// new interaction outside the chosen pair.

#ifndef RITSCAN_MUTATOR_H_
#define RITSCAN_MUTATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ritscan/detector.h"
#include "ritscan/rule_ir.h"
#include "ritscan/source.h"

namespace ritscan {

struct MutationOperator {
  ThreatCategory target = ThreatCategory::kWAC;
  // Cascade operators only: inject `postUpdate` against a `received
  // command` trigger instead of `sendCommand`.
  bool post_update = false;

  // "WAC", "STC", "STC-postUpdate", ...
  std::string Name() const;
  bool operator==(const MutationOperator&) const = default;
};

std::optional<MutationOperator> ParseOperator(const std::string& name);
// The six category operators; with `post_update_variants`, also the
// postUpdate variants of STC and WTC.
std::vector<MutationOperator> DefaultOperators(bool post_update_variants);

// Rule indices into RuleSet::rules. `a` is the rule whose action starts the
// injected interaction.
struct RulePair {
  size_t a = 0;
  size_t b = 0;
  bool operator==(const RulePair&) const = default;
};

struct Injection {
  std::string strategy;
  std::string item;
  std::vector<std::string> values;
  std::vector<std::string> conditions_added;
  std::vector<std::string> actions_added;
  std::vector<std::string> triggers_replaced;

  bool operator==(const Injection&) const = default;
};

struct MutantRecord {
  std::string mutant_id;
  std::string seed_file;
  std::string op;  // MutationOperator::Name()
  ThreatCategory target = ThreatCategory::kWAC;
  std::string rule_a;
  std::string rule_b;
  Injection injection;
  // Relative to the manifest's directory when written.
  std::string output_path;

  bool operator==(const MutantRecord&) const = default;
};

struct Mutant {
  std::string source;
  MutantRecord record;
};

// Pairs satisfying the operator's structural preconditions for which at
// least one strategy yields an acceptable mutant. Contradiction operators
// use unordered pairs (a < b); cascade operators use ordered pairs.
std::vector<RulePair> EnumerateEligiblePairs(const SourceFile& seed,
                                             const RuleSet& rules,
                                             const MutationOperator& op);

// Structural preconditions only.
bool PairPreconditionsHold(const RuleSet& rules, RulePair pair,
                           const MutationOperator& op);

// Applies the first acceptable strategy. Fails with FailedPrecondition when
// none applies. The record's id and paths are left for the caller.
absl::StatusOr<Mutant> ApplyOperator(const SourceFile& seed,
                                     const RuleSet& rules, RulePair pair,
                                     const MutationOperator& op);

struct SamplingStrategy {
  // Exhaustive when unset.
  std::optional<size_t> sample_size;
  uint64_t seed = 0;
};

struct CorpusOptions {
  std::vector<MutationOperator> operators;
  SamplingStrategy strategy;
  // Mutant files, manifest.jsonl and summary.json are written here. Empty
  // means nothing is written.
  std::string output_dir;
};

struct MutantManifest {
  std::vector<MutantRecord> records;
  std::vector<std::string> seeds;
  std::map<std::string, int> totals;  // by operator name
  // Set when a sample was drawn.
  std::optional<uint64_t> rng_seed;
  size_t candidates = 0;  // eligible (seed, operator, pair) combinations

  bool operator==(const MutantManifest&) const = default;
};

// Seeds must parse without errors. Mutant sources are returned alongside the
// manifest in record order.
struct Corpus {
  MutantManifest manifest;
  std::vector<std::string> sources;
};
absl::StatusOr<Corpus> GenerateCorpus(const std::vector<SourceFile>& seeds,
                                      const CorpusOptions& options);

std::string ManifestRecordJson(const MutantRecord& record);
absl::StatusOr<MutantRecord> ParseManifestRecord(const std::string& line);
// Resolves relative output paths against the manifest's directory.
absl::StatusOr<std::vector<MutantRecord>> ReadManifest(const std::string& path);

// Detector recovery of injected threats.
inline constexpr char kMissStrictEventMatching[] = "strict-event-matching";
inline constexpr char kMissUnsupportedConstruct[] = "unsupported-construct";

struct RecoveryOutcome {
  std::string mutant_id;
  std::string op;
  bool recovered = false;
  std::string miss_tag;  // empty when recovered
};

// True when the mutant holds a finding of the target category from rule_a
// to rule_b that the seed does not already have.
bool InjectionRecovered(const RuleSet& seed, const RuleSet& mutant,
                        const MutantRecord& record,
                        const DetectorConfig& config);

RecoveryOutcome EvaluateRecovery(const SourceFile& seed,
                                 const SourceFile& mutant,
                                 const MutantRecord& record,
                                 const DetectorConfig& config);

struct RecoveryTally {
  int total = 0;
  int recovered = 0;
  std::map<std::string, int> misses_by_tag;
};
std::map<std::string, RecoveryTally> TallyRecovery(
    const std::vector<RecoveryOutcome>& outcomes);

}  // namespace ritscan

#endif  // RITSCAN_MUTATOR_H_
