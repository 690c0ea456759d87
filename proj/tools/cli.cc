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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "ritscan/config.h"
#include "ritscan/detector.h"
#include "ritscan/eval.h"
#include "ritscan/hybrid.h"
#include "ritscan/model_client.h"
#include "ritscan/mutator.h"
#include "ritscan/parser.h"
#include "ritscan/report.h"
#include "ritscan/source.h"

namespace ritscan::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CommonOptions {
  std::string config_path;
  std::string format;  // empty: from config
};

struct DetectOptions {
  std::vector<std::string> paths;
  bool lenient = false;
};

struct MutateOptions {
  std::vector<std::string> seeds;
  std::string out_dir;
  std::vector<std::string> operators;
  bool post_update_variants = false;
  std::optional<size_t> sample;
  std::optional<uint64_t> seed;
  bool recovery = false;
  bool lenient = false;
};

struct AdjudicateOptions {
  std::vector<std::string> reports;
  std::string stub;
  std::string audit_path;
  std::vector<std::string> routed;
  std::optional<int> max_in_flight;
};

struct EvalOptions {
  std::string manifest;
  std::string responses;
  std::string replay;
  std::string stub;
  bool live = false;
  std::string experiment;
  std::string taxonomy;
  std::string mode;
  std::optional<int> shots;
  std::string log_out;
  int parallel = 1;
};

struct PrecisionOptions {
  std::string truth;
  std::vector<std::string> before;
  std::vector<std::string> after;
};

struct Options {
  CommonOptions common;
  DetectOptions detect;
  MutateOptions mutate;
  AdjudicateOptions adjudicate;
  EvalOptions eval;
  PrecisionOptions precision;
};

void AddCommon(CLI::App* sub, CommonOptions* o) {
  sub->add_option("--config", o->config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--format", o->format, "Output format: text or structured (JSON)")
      ->check(CLI::IsMember({"text", "structured"}));
}

std::unique_ptr<CLI::App> BuildApp(Options* o) {
  auto app = std::make_unique<CLI::App>(
      "Detects rule interaction threats in openHAB-style automation rules.", "ritscan");
  app->require_subcommand(1);
  app->fallthrough(false);

  CLI::App* detect = app->add_subcommand(
      "detect",
      "Report threats in .rules files. Exit 0: no findings, 1: findings, 2: fatal error");
  detect->add_option("paths", o->detect.paths, "Rules files or directories (searched recursively)")
      ->required();
  detect->add_flag("--lenient", o->detect.lenient,
                   "Let postUpdate actions fire `received command` triggers");
  AddCommon(detect, &o->common);

  CLI::App* mutate = app->add_subcommand("mutate", "Generate a mutant corpus from benign seeds");
  mutate->add_option("seeds", o->mutate.seeds, "Seed rules files or directories")->required();
  mutate->add_option("--out", o->mutate.out_dir,
                     "Directory for mutants, manifest.jsonl and summary.json")
      ->required();
  mutate->add_option("--operators", o->mutate.operators,
                     "Comma-separated operators (SAC,WAC,STC,WTC,SCC,WCC, STC-postUpdate, "
                     "WTC-postUpdate); default: the six category operators")
      ->delimiter(',');
  mutate->add_flag("--post-update-variants", o->mutate.post_update_variants,
                   "Add the postUpdate variants of STC and WTC to the default operators");
  auto* sample = mutate->add_option("--sample", o->mutate.sample,
                                    "Draw this many mutants instead of all eligible ones");
  auto* seed = mutate->add_option("--seed", o->mutate.seed, "Random seed for --sample");
  sample->needs(seed);
  seed->needs(sample);
  mutate->add_flag("--recovery", o->mutate.recovery,
                   "Also report per-operator detector recovery of the injected threats");
  mutate->add_flag("--lenient", o->mutate.lenient,
                   "Measure recovery with lenient event matching");
  AddCommon(mutate, &o->common);

  CLI::App* adjudicate = app->add_subcommand(
      "adjudicate", "Confirm or discard routed findings of structured detector reports");
  adjudicate->add_option("reports", o->adjudicate.reports, "Structured report files")
      ->required()
      ->check(CLI::ExistingFile);
  adjudicate->add_option("--stub", o->adjudicate.stub,
                         "Offline backend: accept-all, reject-all or table:<path>; "
                         "default: the configured HTTP backend");
  adjudicate->add_option("--audit", o->adjudicate.audit_path,
                         "Write one JSON line per subtask answer to this file");
  adjudicate->add_option("--routed", o->adjudicate.routed,
                         "Comma-separated categories to adjudicate; default WAC,WTC")
      ->delimiter(',');
  adjudicate->add_option("--max-in-flight", o->adjudicate.max_in_flight,
                         "Concurrent adjudications")
      ->check(CLI::PositiveNumber);
  AddCommon(adjudicate, &o->common);

  CLI::App* eval = app->add_subcommand("eval", "Score classifications against ground truth");
  eval->add_option("--manifest", o->eval.manifest,
                   "Ground-truth or mutation manifest (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* responses = eval->add_option("--responses", o->eval.responses,
                                     "Recorded responses: JSON lines of {instance_id, response}");
  auto* replay = eval->add_option("--replay", o->eval.replay,
                                  "Per-instance log of an earlier run to rescore");
  auto* stub = eval->add_option("--stub", o->eval.stub,
                                "Offline backend: echo, accept-all, reject-all or table:<path>");
  auto* live = eval->add_flag("--live", o->eval.live, "Query the configured HTTP backend");
  responses->excludes(replay)->excludes(stub)->excludes(live);
  replay->excludes(stub)->excludes(live);
  stub->excludes(live);
  eval->add_option("--experiment", o->eval.experiment,
                   "A: six-class multi, B: six-class single, C: three-class multi, "
                   "D: three-class single")
      ->check(CLI::IsMember({"A", "B", "C", "D"}));
  eval->add_option("--taxonomy", o->eval.taxonomy, "six-class or three-class")
      ->check(CLI::IsMember({"six-class", "three-class"}));
  eval->add_option("--mode", o->eval.mode, "Response mode: multi or single")
      ->check(CLI::IsMember({"multi", "single"}));
  eval->add_option("--shots", o->eval.shots, "Examples per category in the prompt: 0, 1 or 2")
      ->check(CLI::Range(0, 2));
  eval->add_option("--log-out", o->eval.log_out, "Write the per-instance log to this file");
  eval->add_option("--parallel", o->eval.parallel, "Instances predicted concurrently")
      ->check(CLI::PositiveNumber);
  AddCommon(eval, &o->common);

  CLI::App* precision = app->add_subcommand(
      "precision", "Precision of findings before and after adjudication");
  precision->add_option("--truth", o->precision.truth,
                        "JSON lines of {finding: \"<file>#<key>\", true_positive: bool}")
      ->required()
      ->check(CLI::ExistingFile);
  precision->add_option("--before", o->precision.before, "Structured detector reports")
      ->required()
      ->check(CLI::ExistingFile);
  precision->add_option("--after", o->precision.after, "Structured adjudicated reports")
      ->required()
      ->check(CLI::ExistingFile);
  AddCommon(precision, &o->common);

  CLI::App* config = app->add_subcommand("config", "Print the effective configuration");
  AddCommon(config, &o->common);
  return app;
}

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out(out), err(err) {}

  int Fail(const absl::Status& status) {
    err << "ritscan: error: " << status.message() << "\n";
    return kExitFatal;
  }
  int Fail(const std::string& message) {
    err << "ritscan: error: " << message << "\n";
    return kExitFatal;
  }
  void Warn(const std::string& message) { err << "ritscan: warning: " << message << "\n"; }

  std::ostream& out;
  std::ostream& err;
  ToolConfig config;
};

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

absl::StatusOr<std::vector<FindingReport>> ReadReports(const std::vector<std::string>& paths) {
  std::vector<FindingReport> out;
  for (const std::string& path : paths) {
    auto text = ReadFile(path);
    if (!text.ok()) return text.status();
    auto single = ParseStructured(*text);
    if (single.ok()) {
      out.push_back(*std::move(single));
      continue;
    }
    auto lines = ParseStructuredLines(*text);
    if (!lines.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": ", lines.status().message()));
    }
    for (FindingReport& r : *lines) out.push_back(std::move(r));
  }
  return out;
}

void PrintReports(Context& ctx, const std::vector<FindingReport>& reports) {
  for (size_t i = 0; i < reports.size(); ++i) {
    if (ctx.config.format == OutputFormat::kStructured) {
      ctx.out << RenderStructuredLine(reports[i]) << "\n";
    } else {
      if (i > 0) ctx.out << "\n";
      ctx.out << RenderText(reports[i]);
    }
  }
}

absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(
    const std::string& stub, const BackendConfig& config,
    const std::map<std::string, std::string>& echo_labels = {}) {
  if (stub.empty()) {
    auto live = ChatCompletionsBackend::Create(config);
    if (!live.ok()) return live.status();
    return std::unique_ptr<Backend>(*std::move(live));
  }
  if (stub == "accept-all") return MakeAcceptAllBackend();
  if (stub == "reject-all") return MakeRejectAllBackend();
  if (stub == "echo" && !echo_labels.empty()) return MakeGroundTruthEchoBackend(echo_labels);
  if (stub.rfind("table:", 0) == 0) {
    auto table = TableBackend::Load(stub.substr(6));
    if (!table.ok()) return table.status();
    return std::unique_ptr<Backend>(*std::move(table));
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown stub '", stub, "'"));
}

absl::StatusOr<RoutedSet> ParseRouted(const std::vector<std::string>& names) {
  RoutedSet routed;
  for (const std::string& name : names) {
    auto category = ParseCategory(name);
    if (!category) return absl::InvalidArgumentError(absl::StrCat("unknown category ", name));
    routed.insert(*category);
  }
  return routed;
}

int RunDetect(Context& ctx, const DetectOptions& o) {
  auto files = LoadRuleFiles(o.paths);
  if (!files.ok()) return ctx.Fail(files.status());
  if (files->empty()) return ctx.Fail("no .rules files found");
  DetectorConfig detector{ctx.config.strict_event_matching && !o.lenient};

  struct Result {
    RuleSet rules;
    FindingReport report;
  };
  std::vector<std::future<Result>> pending;
  for (const SourceFile& file : *files) {
    pending.push_back(std::async(std::launch::async, [&file, detector] {
      Result r{ParseRuleSet(file), {}};
      if (r.rules.ErrorCount() == 0) r.report = DetectFile(r.rules, detector);
      return r;
    }));
  }
  bool fatal = false;
  bool findings = false;
  std::vector<FindingReport> reports;
  for (size_t i = 0; i < pending.size(); ++i) {
    Result r = pending[i].get();
    for (const Diagnostic& d : r.rules.diagnostics) {
      ctx.err << FormatDiagnostic((*files)[i].path(), d) << "\n";
    }
    if (r.rules.ErrorCount() > 0) {
      fatal = true;
      continue;
    }
    findings = findings || !r.report.findings.empty();
    reports.push_back(std::move(r.report));
  }
  PrintReports(ctx, reports);
  if (fatal) return kExitFatal;
  return findings ? kExitFindings : kExitClean;
}

int RunMutate(Context& ctx, const MutateOptions& o) {
  auto seeds = LoadRuleFiles(o.seeds);
  if (!seeds.ok()) return ctx.Fail(seeds.status());
  if (seeds->empty()) return ctx.Fail("no seed .rules files found");
  CorpusOptions options;
  if (o.operators.empty()) {
    options.operators = DefaultOperators(o.post_update_variants);
  } else {
    for (const std::string& name : o.operators) {
      auto op = ParseOperator(name);
      if (!op) return ctx.Fail(absl::StrCat("unknown operator ", name));
      options.operators.push_back(*op);
    }
  }
  options.strategy.sample_size = o.sample;
  if (o.seed) options.strategy.seed = *o.seed;
  options.output_dir = o.out_dir;
  auto corpus = GenerateCorpus(*seeds, options);
  if (!corpus.ok()) return ctx.Fail(corpus.status());
  const MutantManifest& m = corpus->manifest;

  std::map<std::string, RecoveryTally> recovery;
  if (o.recovery) {
    std::map<std::string, const SourceFile*> by_path;
    for (const SourceFile& s : *seeds) by_path[s.path()] = &s;
    DetectorConfig detector{ctx.config.strict_event_matching && !o.lenient};
    std::vector<RecoveryOutcome> outcomes;
    for (size_t i = 0; i < m.records.size(); ++i) {
      const MutantRecord& r = m.records[i];
      SourceFile mutant(r.mutant_id + ".rules", corpus->sources[i]);
      outcomes.push_back(EvaluateRecovery(*by_path.at(r.seed_file), mutant, r, detector));
    }
    recovery = TallyRecovery(outcomes);
  }

  std::string manifest_path = (fs::path(o.out_dir) / "manifest.jsonl").string();
  if (ctx.config.format == OutputFormat::kStructured) {
    Json j;
    j["manifest"] = manifest_path;
    j["mutants"] = m.records.size();
    j["eligible_candidates"] = m.candidates;
    j["totals"] = m.totals;
    if (o.recovery) {
      Json rec = Json::object();
      for (const auto& [op, t] : recovery) {
        rec[op] = {{"total", t.total},
                   {"recovered", t.recovered},
                   {"rate", PercentOrNa(Recall(t.recovered, t.total - t.recovered))},
                   {"misses", t.misses_by_tag}};
      }
      j["recovery"] = rec;
    }
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << "MANIFEST: " << manifest_path << "\n";
    ctx.out << "MUTANTS: " << m.records.size() << "\n";
    ctx.out << "ELIGIBLE CANDIDATES: " << m.candidates << "\n";
    for (const auto& [op, count] : m.totals) {
      ctx.out << absl::StrFormat("%-16s %6d\n", op, count);
    }
    if (o.recovery) {
      ctx.out << "\nRECOVERY\n";
      ctx.out << absl::StrFormat("%-16s %6s %9s %9s  %s\n", "OPERATOR", "TOTAL", "RECOVERED",
                                 "RATE", "MISSES");
      for (const auto& [op, t] : recovery) {
        std::vector<std::string> misses;
        for (const auto& [tag, n] : t.misses_by_tag) misses.push_back(absl::StrCat(tag, "=", n));
        ctx.out << absl::StrFormat("%-16s %6d %9d %9s  %s\n", op, t.total, t.recovered,
                                   PercentOrNa(Recall(t.recovered, t.total - t.recovered)),
                                   misses.empty() ? "-" : absl::StrJoin(misses, " "));
      }
    }
  }
  return kExitClean;
}

int RunAdjudicate(Context& ctx, const AdjudicateOptions& o) {
  HybridOptions hybrid;
  hybrid.routed = ctx.config.routed;
  hybrid.max_in_flight = o.max_in_flight.value_or(ctx.config.max_in_flight);
  if (!o.routed.empty()) {
    auto routed = ParseRouted(o.routed);
    if (!routed.ok()) return ctx.Fail(routed.status());
    hybrid.routed = *routed;
  }
  auto reports = ReadReports(o.reports);
  if (!reports.ok()) return ctx.Fail(reports.status());
  auto backend = MakeBackend(o.stub, ctx.config.backend);
  if (!backend.ok()) return ctx.Fail(backend.status());

  std::ofstream audit;
  if (!o.audit_path.empty()) {
    audit.open(o.audit_path);
    if (!audit) return ctx.Fail(absl::StrCat("cannot write ", o.audit_path));
  }
  std::vector<FindingReport> finals;
  for (const FindingReport& report : *reports) {
    RuleTexts texts;
    auto source = SourceFile::Load(report.file);
    if (source.ok()) {
      texts = CollectRuleTexts(*source, ParseRuleSet(*source));
    } else {
      ctx.Warn(absl::StrCat(report.file, ": rules file unavailable; prompts omit rule text"));
    }
    auto outcome = RunHybrid(report, texts, hybrid, **backend);
    if (!outcome.ok()) return ctx.Fail(outcome.status());
    for (const AuditRecord& record : outcome->audit) {
      if (audit.is_open()) audit << AuditRecordJson(record) << "\n";
    }
    int confirmed = 0;
    for (const Verdict& v : outcome->verdicts) confirmed += v.decision == Decision::kConfirmed;
    ctx.err << absl::StrFormat("ritscan: %s: %d routed, %d confirmed, %d discarded, %d fail-open\n",
                               report.file, outcome->routed, confirmed,
                               outcome->reconciled.discarded.size(), outcome->fail_open.size());
    if (!outcome->fail_open.empty()) {
      ctx.Warn(absl::StrCat(report.file, ": ", outcome->fail_open.size(),
                            " finding(s) kept unadjudicated and flagged ",
                            kFlagAdjudicationUnavailable));
    }
    finals.push_back(outcome->reconciled.final_report);
  }
  PrintReports(ctx, finals);
  return kExitClean;
}

absl::StatusOr<std::map<std::string, std::string>> ReadResponses(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::map<std::string, std::string> out;
  std::istringstream in(*text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("instance_id") ||
        !j["instance_id"].is_string() || !j.contains("response") || !j["response"].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", number, ": expected {\"instance_id\", \"response\"}"));
    }
    if (!out.emplace(j["instance_id"].get<std::string>(), j["response"].get<std::string>())
             .second) {
      return absl::InvalidArgumentError(absl::StrCat(path, ":", number, ": duplicate id"));
    }
  }
  return out;
}

int RunEval(Context& ctx, const EvalOptions& o) {
  ExperimentConfig config = ctx.config.prompt;
  if (!o.experiment.empty()) {
    auto named = ExperimentConfig::Named(o.experiment[0], config.shots);
    if (!named.ok()) return ctx.Fail(named.status());
    config = *named;
  }
  if (!o.taxonomy.empty()) config.taxonomy = *ParseTaxonomy(o.taxonomy);
  if (!o.mode.empty()) config.multi_response = o.mode == "multi";
  if (o.shots) config.shots = *o.shots;
  if (auto status = config.Validate(); !status.ok()) return ctx.Fail(status);

  auto dataset = ReadGroundTruth(o.manifest);
  if (!dataset.ok()) return ctx.Fail(dataset.status());

  auto check_orphans = [&](const std::vector<std::string>& ids) {
    auto orphans = OrphanIds(*dataset, ids);
    for (const std::string& id : orphans) ctx.err << "ritscan: orphan " << id << "\n";
    return orphans.empty();
  };

  Predictor predictor;
  std::unique_ptr<Backend> backend;
  if (!o.responses.empty()) {
    auto responses = ReadResponses(o.responses);
    if (!responses.ok()) return ctx.Fail(responses.status());
    std::vector<std::string> ids;
    for (const auto& [id, text] : *responses) ids.push_back(id);
    if (!check_orphans(ids)) return ctx.Fail("manifest and responses disagree on instance ids");
    predictor = MakeResponsePredictor(config, *std::move(responses));
  } else if (!o.replay.empty()) {
    auto logs = ReadInstanceLogs(o.replay);
    if (!logs.ok()) return ctx.Fail(logs.status());
    std::vector<std::string> ids;
    for (const InstanceLog& log : *logs) ids.push_back(log.instance_id);
    if (!check_orphans(ids)) return ctx.Fail("manifest and replay log disagree on instance ids");
    predictor = MakeReplayPredictor(*logs);
  } else if (!o.stub.empty() || o.live) {
    std::map<std::string, std::string> truth;
    for (const GroundTruthEntry& e : *dataset) truth[e.instance_id] = TruthLabel(e, config.taxonomy);
    auto made = MakeBackend(o.stub, ctx.config.backend, truth);
    if (!made.ok()) return ctx.Fail(made.status());
    backend = *std::move(made);
    predictor = MakeModelPredictor(config, *backend);
  } else {
    return ctx.Fail("one of --responses, --replay, --stub or --live is required");
  }

  auto result = RunExperiment(config, *dataset, predictor, o.parallel);
  if (!result.ok()) return ctx.Fail(result.status());
  if (!o.log_out.empty()) {
    std::ofstream log(o.log_out);
    if (!log) return ctx.Fail(absl::StrCat("cannot write ", o.log_out));
    for (const InstanceLog& l : result->logs) log << InstanceLogJson(l) << "\n";
  }
  if (result->metrics.instance_errors > 0) {
    ctx.Warn(absl::StrCat(result->metrics.instance_errors,
                          " instance(s) could not be predicted and score as incorrect"));
  }
  ctx.out << (ctx.config.format == OutputFormat::kStructured
                  ? RenderMetricsStructured(result->metrics)
                  : RenderMetricsText(result->metrics));
  return kExitClean;
}

int RunPrecision(Context& ctx, const PrecisionOptions& o) {
  auto truth = ReadTruthLabels(o.truth);
  if (!truth.ok()) return ctx.Fail(truth.status());
  auto before = ReadReports(o.before);
  if (!before.ok()) return ctx.Fail(before.status());
  auto after = ReadReports(o.after);
  if (!after.ok()) return ctx.Fail(after.status());
  auto table = HybridPrecision(*before, *after, *truth);
  if (!table.ok()) return ctx.Fail(table.status());
  ctx.out << (ctx.config.format == OutputFormat::kStructured ? RenderPrecisionStructured(*table)
                                                             : RenderPrecisionText(*table));
  return kExitClean;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::unique_ptr<CLI::App> app = BuildApp(&o);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app->exit(e, out, err);
    return code == 0 ? kExitClean : kExitFatal;
  }

  Context ctx(out, err);
  if (!o.common.config_path.empty()) {
    auto config = LoadToolConfig(o.common.config_path);
    if (!config.ok()) return ctx.Fail(config.status());
    ctx.config = *config;
  }
  if (!o.common.format.empty()) ctx.config.format = *ParseOutputFormat(o.common.format);

  if (app->got_subcommand("detect")) return RunDetect(ctx, o.detect);
  if (app->got_subcommand("mutate")) return RunMutate(ctx, o.mutate);
  if (app->got_subcommand("adjudicate")) return RunAdjudicate(ctx, o.adjudicate);
  if (app->got_subcommand("eval")) return RunEval(ctx, o.eval);
  if (app->got_subcommand("precision")) return RunPrecision(ctx, o.precision);
  out << ToolConfigJson(ctx.config);
  return kExitClean;
}

std::vector<FlagDoc> DescribeFlags() {
  Options o;
  std::unique_ptr<CLI::App> app = BuildApp(&o);
  std::vector<FlagDoc> docs;
  for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt == sub->get_help_ptr()) continue;
      std::string name = opt->get_lnames().empty() ? opt->get_name() : "--" + opt->get_lnames()[0];
      docs.push_back({sub->get_name(), name, opt->get_description()});
    }
  }
  return docs;
}

}  // namespace ritscan::cli
