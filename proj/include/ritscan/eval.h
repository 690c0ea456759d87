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

// Ground truth, experiment protocols and metrics for classification runs,
// and precision tables for the adjudication pipeline.

#ifndef RITSCAN_EVAL_H_
#define RITSCAN_EVAL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ritscan/detector.h"
#include "ritscan/model_client.h"
#include "ritscan/mutator.h"
#include "ritscan/prompts.h"

namespace ritscan {

struct GroundTruthEntry {
  std::string instance_id;
  std::string source_file;  // ruleset holding the pair
  std::string rule_a;
  std::string rule_b;
  ThreatCategory fine = ThreatCategory::kWAC;

  CoarseCategory coarse() const { return Aggregate(fine); }

  bool operator==(const GroundTruthEntry&) const = default;
};

GroundTruthEntry GroundTruthFromMutant(const MutantRecord& record);

// {"instance_id","source_file","rule_a","rule_b","fine","coarse"}
std::string GroundTruthJson(const GroundTruthEntry& entry);
// Accepts ground-truth records and mutation manifest records. A given coarse
// label must agree with the fine one.
absl::StatusOr<GroundTruthEntry> ParseGroundTruthLine(const std::string& line);
// Relative source files resolve against the manifest's directory. Instance
// ids must be unique.
absl::StatusOr<std::vector<GroundTruthEntry>> ReadGroundTruth(const std::string& path);

struct ExperimentConfig {
  Taxonomy taxonomy = Taxonomy::kSixClass;
  bool multi_response = true;
  int shots = 0;

  // A: six-class, multi. B: six-class, single. C: three-class, multi.
  // D: three-class, single.
  static absl::StatusOr<ExperimentConfig> Named(char letter, int shots = 0);
  // The letter of the (taxonomy, response mode) cell.
  char Letter() const;
  PromptTemplate Template() const;
  absl::Status Validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// The label an instance is scored against under `taxonomy`.
std::string TruthLabel(const GroundTruthEntry& entry, Taxonomy taxonomy);

// Any parse failure scores incorrect. Multi: truth among the labels.
// Single: the labels are exactly {truth}.
bool ScorePrediction(const LabelSet& prediction, const std::string& truth,
                     bool multi_response);

// An exact ratio. Display rounds half-up to two decimals of a percent.
struct Ratio {
  int64_t num = 0;
  int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string Percent() const;  // "87.70%"

  bool operator==(const Ratio&) const = default;
};

inline constexpr char kNotApplicable[] = "N/A";

std::string PercentOrNa(const std::optional<Ratio>& ratio);

// Unset for a zero denominator.
std::optional<Ratio> Recall(int64_t tp, int64_t fn);
std::optional<Ratio> Precision(int64_t tp, int64_t fp);

struct ClassCount {
  int64_t correct = 0;
  int64_t total = 0;

  bool operator==(const ClassCount&) const = default;
};

struct ConfusionTally {
  std::map<std::string, ClassCount> per_class;  // keyed by truth label
  int64_t parse_failures = 0;
  int64_t instance_errors = 0;

  void Add(const std::string& truth, bool correct);
  void Merge(const ConfusionTally& other);
  int64_t Total() const;
  int64_t Correct() const;

  bool operator==(const ConfusionTally&) const = default;
};

// Classes with no instances are omitted.
std::map<std::string, Ratio> PerClassRecall(const ConfusionTally& tally);
// Correct over total, pooled. Fails on an empty tally.
absl::StatusOr<Ratio> MicroAccuracy(const ConfusionTally& tally);

struct MetricsRow {
  ExperimentConfig config;
  std::map<std::string, Ratio> per_class_recall;
  Ratio accuracy;
  int64_t instances = 0;
  int64_t parse_failures = 0;
  int64_t instance_errors = 0;

  bool operator==(const MetricsRow&) const = default;
};

// One scored instance; enough to recompute every metric offline.
struct InstanceLog {
  std::string instance_id;
  std::string truth;
  std::vector<std::string> labels;
  std::optional<ParseFailure> failure;
  std::string raw_response;
  std::string error;  // set when no prediction could be made
  bool correct = false;

  bool operator==(const InstanceLog&) const = default;
};

std::string InstanceLogJson(const InstanceLog& log);
absl::StatusOr<InstanceLog> ParseInstanceLog(const std::string& line);
absl::StatusOr<std::vector<InstanceLog>> ReadInstanceLogs(const std::string& path);

struct Prediction {
  LabelSet labels;
  std::string raw_response;
};

// An error means the instance could not be predicted at all (for example,
// its ruleset is unreadable); it is logged and scored incorrect.
using Predictor = std::function<absl::StatusOr<Prediction>(const GroundTruthEntry&)>;

// Classifies the instance's ruleset with the configured prompt.
Predictor MakeModelPredictor(const ExperimentConfig& config, Backend& backend);
// Parses recorded raw responses by instance id.
Predictor MakeResponsePredictor(const ExperimentConfig& config,
                                std::map<std::string, std::string> responses);
// Returns the labels of a previous run's log verbatim.
Predictor MakeReplayPredictor(const std::vector<InstanceLog>& logs);

struct ExperimentResult {
  MetricsRow metrics;
  std::vector<InstanceLog> logs;  // in dataset order
};

// Predictions run on up to `parallelism` threads; logs and metrics do not
// depend on it. Fails on an invalid config or an empty dataset.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config,
                                               const std::vector<GroundTruthEntry>& dataset,
                                               const Predictor& predictor,
                                               int parallelism = 1);

// Rescores logged labels under `config`.
absl::StatusOr<MetricsRow> MetricsFromLogs(const ExperimentConfig& config,
                                           const std::vector<InstanceLog>& logs);

// Ids on one side only, each prefixed with its side.
std::vector<std::string> OrphanIds(const std::vector<GroundTruthEntry>& dataset,
                                   const std::vector<std::string>& predicted_ids);

std::string RenderMetricsText(const MetricsRow& row);
std::string RenderMetricsStructured(const MetricsRow& row);

// Precision of reported findings against TP/FP labels, before and after
// reconciliation.
struct PrecisionCell {
  int64_t true_positives = 0;
  int64_t reported = 0;

  std::optional<Ratio> precision() const;
  bool operator==(const PrecisionCell&) const = default;
};

struct PrecisionRow {
  std::map<ThreatCategory, PrecisionCell> by_category;
  PrecisionCell total;

  bool operator==(const PrecisionRow&) const = default;
};

struct PrecisionTable {
  PrecisionRow before;
  PrecisionRow after;

  bool operator==(const PrecisionTable&) const = default;
};

// "<file>#<finding key>"
std::string FindingId(const std::string& file, const Finding& finding);

// Finding id to true-positive flag.
using TruthLabels = std::map<std::string, bool>;

// {"finding": id, "true_positive": bool} per line.
absl::StatusOr<TruthLabels> ReadTruthLabels(const std::string& path);

// Every finding in `before` must be labeled; `after` must be drawn from it.
absl::StatusOr<PrecisionTable> HybridPrecision(const std::vector<FindingReport>& before,
                                               const std::vector<FindingReport>& after,
                                               const TruthLabels& truth);

// Rows "Before" and "After"; columns WAC SAC WTC STC WCC SCC Total.
std::string RenderPrecisionText(const PrecisionTable& table);
std::string RenderPrecisionStructured(const PrecisionTable& table);

}  // namespace ritscan

#endif  // RITSCAN_EVAL_H_
