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

#include "ritscan/eval.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "ritscan/hybrid.h"
#include "ritscan/parser.h"
#include "ritscan/source.h"

namespace ritscan {
namespace {

using Json = nlohmann::ordered_json;

Json ParseObject(const std::string& line) {
  Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return Json();
  return j;
}

bool Blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Calls `parse` on every nonblank line, prefixing errors with the location.
template <typename T, typename Parse>
absl::StatusOr<std::vector<T>> ReadLines(const std::string& path, Parse parse) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<T> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (Blank(line)) continue;
    absl::StatusOr<T> item = parse(line);
    if (!item.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", number, ": ", item.status().message()));
    }
    out.push_back(*std::move(item));
  }
  return out;
}

const char* kFailureNames[] = {"blank", "no-valid-label", "ambiguous"};

Json CellJson(const PrecisionCell& cell) {
  auto p = cell.precision();
  return {{"true_positives", cell.true_positives},
          {"reported", cell.reported},
          {"precision", p ? Json(p->value()) : Json(nullptr)},
          {"display", PercentOrNa(p)}};
}

Json RowJson(const PrecisionRow& row) {
  Json j = Json::object();
  for (ThreatCategory c : kAllCategories) {
    auto it = row.by_category.find(c);
    j[CategoryName(c)] = CellJson(it == row.by_category.end() ? PrecisionCell{} : it->second);
  }
  j["Total"] = CellJson(row.total);
  return j;
}

}  // namespace

GroundTruthEntry GroundTruthFromMutant(const MutantRecord& record) {
  return {record.mutant_id, record.output_path, record.rule_a, record.rule_b, record.target};
}

std::string GroundTruthJson(const GroundTruthEntry& entry) {
  Json j{{"instance_id", entry.instance_id},
         {"source_file", entry.source_file},
         {"rule_a", entry.rule_a},
         {"rule_b", entry.rule_b},
         {"fine", CategoryName(entry.fine)},
         {"coarse", CoarseName(entry.coarse())}};
  return j.dump();
}

absl::StatusOr<GroundTruthEntry> ParseGroundTruthLine(const std::string& line) {
  Json j = ParseObject(line);
  if (j.is_null()) return absl::InvalidArgumentError("record is not a JSON object");
  if (j.contains("mutant_id")) {
    auto record = ParseManifestRecord(line);
    if (!record.ok()) return record.status();
    return GroundTruthFromMutant(*record);
  }
  try {
    GroundTruthEntry e;
    e.instance_id = j.at("instance_id").get<std::string>();
    e.source_file = j.value("source_file", "");
    e.rule_a = j.value("rule_a", "");
    e.rule_b = j.value("rule_b", "");
    std::string fine = j.at("fine").get<std::string>();
    auto category = ParseCategory(fine);
    if (!category) return absl::InvalidArgumentError(absl::StrCat("unknown label ", fine));
    e.fine = *category;
    if (j.contains("coarse")) {
      auto coarse = ParseCoarse(j["coarse"].get<std::string>());
      if (!coarse || *coarse != e.coarse()) {
        return absl::InvalidArgumentError(
            absl::StrCat("coarse label disagrees with ", CategoryName(e.fine)));
      }
    }
    if (e.instance_id.empty()) return absl::InvalidArgumentError("empty instance_id");
    return e;
  } catch (const Json::exception& ex) {
    return absl::InvalidArgumentError(ex.what());
  }
}

absl::StatusOr<std::vector<GroundTruthEntry>> ReadGroundTruth(const std::string& path) {
  auto entries = ReadLines<GroundTruthEntry>(path, ParseGroundTruthLine);
  if (!entries.ok()) return entries.status();
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  std::set<std::string> ids;
  for (GroundTruthEntry& e : *entries) {
    if (!ids.insert(e.instance_id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": duplicate instance id ", e.instance_id));
    }
    if (!e.source_file.empty() && std::filesystem::path(e.source_file).is_relative()) {
      e.source_file = (dir / e.source_file).string();
    }
  }
  return entries;
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::Named(char letter, int shots) {
  ExperimentConfig c;
  c.shots = shots;
  switch (letter) {
    case 'A': case 'a':
      break;
    case 'B': case 'b':
      c.multi_response = false;
      break;
    case 'C': case 'c':
      c.taxonomy = Taxonomy::kThreeClass;
      break;
    case 'D': case 'd':
      c.taxonomy = Taxonomy::kThreeClass;
      c.multi_response = false;
      break;
    default:
      return absl::InvalidArgumentError(
          absl::StrCat("unknown experiment '", std::string(1, letter), "'; expected A-D"));
  }
  auto status = c.Validate();
  if (!status.ok()) return status;
  return c;
}

char ExperimentConfig::Letter() const {
  char base = taxonomy == Taxonomy::kSixClass ? 'A' : 'C';
  return multi_response ? base : static_cast<char>(base + 1);
}

PromptTemplate ExperimentConfig::Template() const {
  PromptTemplate t;
  t.shots = shots;
  t.taxonomy = taxonomy;
  t.multi_response = multi_response;
  return t;
}

absl::Status ExperimentConfig::Validate() const { return Template().Validate(); }

std::string TruthLabel(const GroundTruthEntry& entry, Taxonomy taxonomy) {
  return taxonomy == Taxonomy::kSixClass ? CategoryName(entry.fine)
                                         : CoarseName(entry.coarse());
}

bool ScorePrediction(const LabelSet& prediction, const std::string& truth,
                     bool multi_response) {
  if (!prediction.ok()) return false;
  const auto& labels = prediction.labels;
  if (multi_response) return std::find(labels.begin(), labels.end(), truth) != labels.end();
  return labels.size() == 1 && labels[0] == truth;
}

std::string Ratio::Percent() const {
  // Hundredths of a percent, rounded half-up.
  __int128 scaled = (static_cast<__int128>(num) * 20000 + den) / (2 * static_cast<__int128>(den));
  int64_t h = static_cast<int64_t>(scaled);
  return absl::StrFormat("%d.%02d%%", h / 100, h % 100);
}

std::string PercentOrNa(const std::optional<Ratio>& ratio) {
  return ratio ? ratio->Percent() : kNotApplicable;
}

std::optional<Ratio> Recall(int64_t tp, int64_t fn) {
  if (tp + fn <= 0) return std::nullopt;
  return Ratio{tp, tp + fn};
}

std::optional<Ratio> Precision(int64_t tp, int64_t fp) {
  if (tp + fp <= 0) return std::nullopt;
  return Ratio{tp, tp + fp};
}

void ConfusionTally::Add(const std::string& truth, bool correct) {
  ClassCount& c = per_class[truth];
  ++c.total;
  if (correct) ++c.correct;
}

void ConfusionTally::Merge(const ConfusionTally& other) {
  for (const auto& [label, count] : other.per_class) {
    per_class[label].correct += count.correct;
    per_class[label].total += count.total;
  }
  parse_failures += other.parse_failures;
  instance_errors += other.instance_errors;
}

int64_t ConfusionTally::Total() const {
  int64_t n = 0;
  for (const auto& [label, count] : per_class) n += count.total;
  return n;
}

int64_t ConfusionTally::Correct() const {
  int64_t n = 0;
  for (const auto& [label, count] : per_class) n += count.correct;
  return n;
}

std::map<std::string, Ratio> PerClassRecall(const ConfusionTally& tally) {
  std::map<std::string, Ratio> out;
  for (const auto& [label, count] : tally.per_class) {
    if (count.total > 0) out[label] = Ratio{count.correct, count.total};
  }
  return out;
}

absl::StatusOr<Ratio> MicroAccuracy(const ConfusionTally& tally) {
  int64_t total = tally.Total();
  if (total == 0) return absl::InvalidArgumentError("accuracy of an empty dataset");
  return Ratio{tally.Correct(), total};
}

std::string InstanceLogJson(const InstanceLog& log) {
  Json j{{"instance_id", log.instance_id}, {"truth", log.truth}, {"labels", log.labels}};
  j["failure"] = log.failure ? Json(kFailureNames[static_cast<int>(*log.failure)]) : Json(nullptr);
  j["raw_response"] = log.raw_response;
  j["error"] = log.error;
  j["correct"] = log.correct;
  return j.dump();
}

absl::StatusOr<InstanceLog> ParseInstanceLog(const std::string& line) {
  Json j = ParseObject(line);
  if (j.is_null()) return absl::InvalidArgumentError("log record is not a JSON object");
  try {
    InstanceLog log;
    log.instance_id = j.at("instance_id").get<std::string>();
    log.truth = j.at("truth").get<std::string>();
    log.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("failure") && !j["failure"].is_null()) {
      auto failure = ParseParseFailure(j["failure"].get<std::string>());
      if (!failure) return absl::InvalidArgumentError("unknown parse failure");
      log.failure = failure;
    }
    log.raw_response = j.value("raw_response", "");
    log.error = j.value("error", "");
    log.correct = j.value("correct", false);
    return log;
  } catch (const Json::exception& ex) {
    return absl::InvalidArgumentError(ex.what());
  }
}

absl::StatusOr<std::vector<InstanceLog>> ReadInstanceLogs(const std::string& path) {
  return ReadLines<InstanceLog>(path, ParseInstanceLog);
}

Predictor MakeModelPredictor(const ExperimentConfig& config, Backend& backend) {
  PromptTemplate tmpl = config.Template();
  return [tmpl, &backend](const GroundTruthEntry& e) -> absl::StatusOr<Prediction> {
    auto source = SourceFile::Load(e.source_file);
    if (!source.ok()) return source.status();
    RuleSet rules = ParseRuleSet(*source);
    if (rules.ErrorCount() > 0) {
      return absl::InvalidArgumentError(
          FormatDiagnostic(source->path(), rules.diagnostics.front()));
    }
    auto recovered = RecoverNegatives(source->content(), tmpl, backend, e.instance_id);
    if (!recovered.ok()) return recovered.status();
    if (!recovered->record.ok()) {
      return absl::UnavailableError(absl::StrCat(
          "backend-exhausted:", FailureClassName(*recovered->record.exhausted)));
    }
    return Prediction{recovered->labels, recovered->raw_response};
  };
}

Predictor MakeResponsePredictor(const ExperimentConfig& config,
                                std::map<std::string, std::string> responses) {
  return [config, responses = std::move(responses)](
             const GroundTruthEntry& e) -> absl::StatusOr<Prediction> {
    auto it = responses.find(e.instance_id);
    if (it == responses.end()) {
      return absl::NotFoundError(absl::StrCat("no response for ", e.instance_id));
    }
    return Prediction{ParseModelResponse(it->second, config.taxonomy, config.multi_response),
                      it->second};
  };
}

Predictor MakeReplayPredictor(const std::vector<InstanceLog>& logs) {
  std::map<std::string, InstanceLog> by_id;
  for (const InstanceLog& log : logs) by_id[log.instance_id] = log;
  return [by_id = std::move(by_id)](const GroundTruthEntry& e) -> absl::StatusOr<Prediction> {
    auto it = by_id.find(e.instance_id);
    if (it == by_id.end()) {
      return absl::NotFoundError(absl::StrCat("no logged prediction for ", e.instance_id));
    }
    if (!it->second.error.empty()) return absl::UnknownError(it->second.error);
    return Prediction{LabelSet{it->second.labels, it->second.failure}, it->second.raw_response};
  };
}

absl::StatusOr<MetricsRow> MetricsFromLogs(const ExperimentConfig& config,
                                           const std::vector<InstanceLog>& logs) {
  auto status = config.Validate();
  if (!status.ok()) return status;
  ConfusionTally tally;
  for (const InstanceLog& log : logs) {
    bool correct = false;
    if (!log.error.empty()) {
      ++tally.instance_errors;
    } else if (log.failure) {
      ++tally.parse_failures;
    } else {
      correct = ScorePrediction(LabelSet{log.labels, std::nullopt}, log.truth,
                                config.multi_response);
    }
    tally.Add(log.truth, correct);
  }
  auto accuracy = MicroAccuracy(tally);
  if (!accuracy.ok()) return accuracy.status();
  MetricsRow row;
  row.config = config;
  row.per_class_recall = PerClassRecall(tally);
  row.accuracy = *accuracy;
  row.instances = tally.Total();
  row.parse_failures = tally.parse_failures;
  row.instance_errors = tally.instance_errors;
  return row;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config,
                                               const std::vector<GroundTruthEntry>& dataset,
                                               const Predictor& predictor, int parallelism) {
  auto status = config.Validate();
  if (!status.ok()) return status;
  if (dataset.empty()) return absl::InvalidArgumentError("empty dataset");
  std::set<std::string> ids;
  for (const GroundTruthEntry& e : dataset) {
    if (!ids.insert(e.instance_id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate instance id ", e.instance_id));
    }
  }

  std::vector<InstanceLog> logs(dataset.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < dataset.size(); i = next++) {
      const GroundTruthEntry& e = dataset[i];
      InstanceLog& log = logs[i];
      log.instance_id = e.instance_id;
      log.truth = TruthLabel(e, config.taxonomy);
      auto prediction = predictor(e);
      if (!prediction.ok()) {
        log.error = std::string(prediction.status().message());
        if (log.error.empty()) log.error = prediction.status().ToString();
        continue;
      }
      log.labels = prediction->labels.labels;
      log.failure = prediction->labels.failure;
      log.raw_response = prediction->raw_response;
      log.correct = ScorePrediction(prediction->labels, log.truth, config.multi_response);
    }
  };
  size_t threads = std::min<size_t>(std::max(1, parallelism), dataset.size());
  std::vector<std::thread> pool;
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  auto metrics = MetricsFromLogs(config, logs);
  if (!metrics.ok()) return metrics.status();
  return ExperimentResult{*std::move(metrics), std::move(logs)};
}

std::vector<std::string> OrphanIds(const std::vector<GroundTruthEntry>& dataset,
                                   const std::vector<std::string>& predicted_ids) {
  std::set<std::string> truth;
  for (const GroundTruthEntry& e : dataset) truth.insert(e.instance_id);
  std::set<std::string> predicted(predicted_ids.begin(), predicted_ids.end());
  std::vector<std::string> out;
  for (const std::string& id : truth) {
    if (!predicted.count(id)) out.push_back("manifest-only: " + id);
  }
  for (const std::string& id : predicted) {
    if (!truth.count(id)) out.push_back("prediction-only: " + id);
  }
  return out;
}

std::string RenderMetricsText(const MetricsRow& row) {
  const ExperimentConfig& c = row.config;
  std::string out = absl::StrFormat(
      "EXPERIMENT: %c (%s, %s, %d-shot)\n", c.Letter(), TaxonomyName(c.taxonomy),
      c.multi_response ? "multiple responses allowed" : "single response only", c.shots);
  absl::StrAppend(&out, absl::StrFormat("%-8s %9s %9s %9s\n", "CLASS", "CORRECT", "TOTAL",
                                        "RECALL"));
  for (const std::string& label : TaxonomyLabels(c.taxonomy)) {
    auto it = row.per_class_recall.find(label);
    if (it == row.per_class_recall.end()) {
      absl::StrAppend(&out, absl::StrFormat("%-8s %9d %9d %9s\n", label, 0, 0, kNotApplicable));
    } else {
      absl::StrAppend(&out, absl::StrFormat("%-8s %9d %9d %9s\n", label, it->second.num,
                                            it->second.den, it->second.Percent()));
    }
  }
  absl::StrAppend(&out, absl::StrFormat("ACCURACY: %d/%d %s\n", row.accuracy.num,
                                        row.accuracy.den, row.accuracy.Percent()));
  absl::StrAppend(&out, "PARSE FAILURES: ", row.parse_failures, "\n");
  absl::StrAppend(&out, "INSTANCE ERRORS: ", row.instance_errors, "\n");
  return out;
}

std::string RenderMetricsStructured(const MetricsRow& row) {
  Json j;
  j["experiment"] = std::string(1, row.config.Letter());
  j["taxonomy"] = TaxonomyName(row.config.taxonomy);
  j["multi_response"] = row.config.multi_response;
  j["shots"] = row.config.shots;
  Json classes = Json::object();
  for (const std::string& label : TaxonomyLabels(row.config.taxonomy)) {
    auto it = row.per_class_recall.find(label);
    Json cell;
    if (it == row.per_class_recall.end()) {
      cell = {{"correct", 0}, {"total", 0}, {"recall", nullptr}, {"display", kNotApplicable}};
    } else {
      cell = {{"correct", it->second.num},
              {"total", it->second.den},
              {"recall", it->second.value()},
              {"display", it->second.Percent()}};
    }
    classes[label] = cell;
  }
  j["per_class_recall"] = classes;
  j["accuracy"] = {{"correct", row.accuracy.num},
                   {"total", row.accuracy.den},
                   {"value", row.accuracy.value()},
                   {"display", row.accuracy.Percent()}};
  j["instances"] = row.instances;
  j["parse_failures"] = row.parse_failures;
  j["instance_errors"] = row.instance_errors;
  return j.dump(2) + "\n";
}

std::optional<Ratio> PrecisionCell::precision() const {
  return Precision(true_positives, reported - true_positives);
}

std::string FindingId(const std::string& file, const Finding& finding) {
  return absl::StrCat(file, "#", finding.Key());
}

absl::StatusOr<TruthLabels> ReadTruthLabels(const std::string& path) {
  using Entry = std::pair<std::string, bool>;
  auto entries = ReadLines<Entry>(path, [](const std::string& line) -> absl::StatusOr<Entry> {
    Json j = ParseObject(line);
    if (j.is_null()) return absl::InvalidArgumentError("label is not a JSON object");
    try {
      return Entry{j.at("finding").get<std::string>(), j.at("true_positive").get<bool>()};
    } catch (const Json::exception& ex) {
      return absl::InvalidArgumentError(ex.what());
    }
  });
  if (!entries.ok()) return entries.status();
  TruthLabels labels;
  for (const auto& [id, tp] : *entries) {
    if (!labels.emplace(id, tp).second) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": duplicate label for ", id));
    }
  }
  return labels;
}

absl::StatusOr<PrecisionTable> HybridPrecision(const std::vector<FindingReport>& before,
                                               const std::vector<FindingReport>& after,
                                               const TruthLabels& truth) {
  PrecisionTable table;
  std::set<std::string> reported;
  for (const FindingReport& report : before) {
    for (const Finding& f : report.findings) {
      std::string id = FindingId(report.file, f);
      auto it = truth.find(id);
      if (it == truth.end()) return absl::NotFoundError(absl::StrCat("unlabeled finding ", id));
      reported.insert(id);
      for (PrecisionCell* cell : {&table.before.by_category[f.category], &table.before.total}) {
        ++cell->reported;
        if (it->second) ++cell->true_positives;
      }
    }
  }
  for (const FindingReport& report : after) {
    for (const Finding& f : report.findings) {
      std::string id = FindingId(report.file, f);
      if (!reported.count(id)) {
        return absl::InvalidArgumentError(absl::StrCat(id, " is not in the input report"));
      }
      for (PrecisionCell* cell : {&table.after.by_category[f.category], &table.after.total}) {
        ++cell->reported;
        if (truth.at(id)) ++cell->true_positives;
      }
    }
  }
  return table;
}

std::string RenderPrecisionText(const PrecisionTable& table) {
  std::string out = absl::StrFormat("%-8s", "STAGE");
  for (ThreatCategory c : kAllCategories) absl::StrAppend(&out, absl::StrFormat("%9s", CategoryName(c)));
  absl::StrAppend(&out, absl::StrFormat("%9s\n", "Total"));
  for (const auto& [name, row] : {std::pair<const char*, const PrecisionRow*>{"Before", &table.before},
                                  {"After", &table.after}}) {
    absl::StrAppend(&out, absl::StrFormat("%-8s", name));
    for (ThreatCategory c : kAllCategories) {
      auto it = row->by_category.find(c);
      std::optional<Ratio> p = it == row->by_category.end() ? std::nullopt : it->second.precision();
      absl::StrAppend(&out, absl::StrFormat("%9s", PercentOrNa(p)));
    }
    absl::StrAppend(&out, absl::StrFormat("%9s\n", PercentOrNa(row->total.precision())));
  }
  return out;
}

std::string RenderPrecisionStructured(const PrecisionTable& table) {
  Json j;
  j["before"] = RowJson(table.before);
  j["after"] = RowJson(table.after);
  return j.dump(2) + "\n";
}

}  // namespace ritscan
