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

// Runs the acceptance criteria offline and prints one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "ritscan/detector.h"
#include "ritscan/eval.h"
#include "ritscan/hybrid.h"
#include "ritscan/model_client.h"
#include "ritscan/mutator.h"
#include "ritscan/parser.h"
#include "ritscan/prompts.h"
#include "ritscan/report.h"
#include "support/brute_force.h"
#include "support/mock_chat_server.h"
#include "support/report_fixtures.h"
#include "support/testdata.h"

namespace ritscan {
namespace {

using testing::ParseTestdata;
using testing::ReadTestdata;
using testing::TestdataPath;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a failed check; the first failure's message is kept.
  void Check(bool ok, const std::string& message) {
    if (ok) return;
    if (pass) detail = message;
    pass = false;
  }
};

std::vector<ThreatCategory> Categories(const FindingReport& report) {
  std::vector<ThreatCategory> out;
  for (const Finding& f : report.findings) out.push_back(f.category);
  return out;
}

Outcome TaxonomyFixedPoints() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  struct Case {
    const char* file;
    ThreatCategory fine;
    CoarseCategory coarse;
  };
  for (const Case& c : {Case{"taxonomy/window_lock_contradiction.rules", ThreatCategory::kSAC, CoarseCategory::kAC},
                        Case{"taxonomy/foyer_light_cascade.rules", ThreatCategory::kWTC, CoarseCategory::kTC},
                        Case{"taxonomy/window_lock_enablement.rules", ThreatCategory::kSCC, CoarseCategory::kCC}}) {
    FindingReport report = DetectFile(ParseTestdata(c.file), {});
    out.Check(Categories(report) == std::vector<ThreatCategory>{c.fine},
              absl::StrCat(c.file, ": expected exactly one ", CategoryName(c.fine)));
    out.Check(Aggregate(c.fine) == c.coarse, absl::StrCat(CategoryName(c.fine), " aggregates wrongly"));
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.Check(ms < 1000, absl::StrCat("took ", ms, " ms"));
  if (out.pass) out.detail = absl::StrCat("SAC->AC, WTC->TC, SCC->CC in ", static_cast<int>(ms), " ms");
  return out;
}

Outcome ReportGolden() {
  Outcome out;
  std::string golden = ReadTestdata("golden/wac_report.txt");
  std::string rendered = RenderText(testing::WateringWacReport());
  out.Check(rendered == golden, "synthetic WAC report differs from golden");
  out.Check(golden.find("no conditions guarding action") != std::string::npos,
            "golden lacks the unguarded-action marker");
  for (absl::string_view line : absl::StrSplit(ThreatDescription(CoarseCategory::kAC), '\n')) {
    out.Check(golden.find(absl::StrCat("\n    ", line, "\n")) != std::string::npos,
              "golden lacks the contradiction description");
  }
  if (out.pass) out.detail = absl::StrCat("byte-identical, ", golden.size(), " bytes");
  return out;
}

Outcome MetricsOracle() {
  Outcome out;
  Ratio accuracy{2188, 2495};
  std::optional<Ratio> recall = Recall(61, 53);
  out.Check(accuracy.Percent() == "87.70%", "accuracy displays " + accuracy.Percent());
  out.Check(std::fabs(accuracy.value() * 100 - 87.70) <= 0.01, "accuracy off by more than 0.01");
  out.Check(recall && recall->Percent() == "53.51%", "recall displays wrongly");
  out.Check(recall && std::fabs(recall->value() * 100 - 53.51) <= 0.01, "recall off by more than 0.01");
  if (out.pass) out.detail = "87.70% and 53.51%";
  return out;
}

const SourceFile* SeedFor(const std::vector<SourceFile>& seeds, const std::string& path) {
  for (const SourceFile& s : seeds) {
    if (s.path() == path) return &s;
  }
  return nullptr;
}

struct CorpusRun {
  std::vector<SourceFile> seeds;
  Corpus corpus;
  bool ok = false;
};

CorpusRun BuildCorpus() {
  CorpusRun run;
  auto seeds = LoadRuleFiles({testing::SeedDir()});
  if (!seeds.ok()) return run;
  run.seeds = *seeds;
  CorpusOptions options;
  options.operators = DefaultOperators(/*post_update_variants=*/true);
  auto corpus = GenerateCorpus(run.seeds, options);
  if (!corpus.ok()) return run;
  run.corpus = *std::move(corpus);
  run.ok = true;
  return run;
}

Outcome MutationRoundTrip(const CorpusRun& run) {
  Outcome out;
  out.Check(run.ok && !run.corpus.sources.empty(), "corpus generation failed");
  if (!out.pass) return out;
  DetectorConfig strict;
  DetectorConfig lenient;
  lenient.strict_event_matching = false;
  std::vector<RecoveryOutcome> strict_outcomes;
  int unparseable = 0;
  int variants = 0, variant_strict = 0, variant_lenient = 0;
  for (size_t i = 0; i < run.corpus.sources.size(); ++i) {
    const MutantRecord& record = run.corpus.manifest.records[i];
    SourceFile mutant(record.mutant_id + ".rules", run.corpus.sources[i]);
    if (ParseRuleSet(mutant).ErrorCount() > 0) ++unparseable;
    const SourceFile* seed = SeedFor(run.seeds, record.seed_file);
    out.Check(seed != nullptr, "no seed for " + record.mutant_id);
    if (seed == nullptr) continue;
    RecoveryOutcome outcome = EvaluateRecovery(*seed, mutant, record, strict);
    if (record.op.find("postUpdate") != std::string::npos) {
      ++variants;
      variant_strict += outcome.recovered;
      variant_lenient += EvaluateRecovery(*seed, mutant, record, lenient).recovered;
      continue;
    }
    strict_outcomes.push_back(outcome);
    out.Check(outcome.recovered || outcome.miss_tag == kMissStrictEventMatching ||
                  outcome.miss_tag == kMissUnsupportedConstruct,
              "untagged miss " + record.mutant_id);
  }
  out.Check(unparseable == 0, absl::StrCat(unparseable, " mutants fail to parse"));
  std::string lowest;
  double worst = 2.0;
  for (const auto& [op, tally] : TallyRecovery(strict_outcomes)) {
    double rate = static_cast<double>(tally.recovered) / tally.total;
    if (rate < worst) {  // first operator wins ties
      worst = rate;
      lowest = op;
    }
    out.Check(rate >= 0.95, absl::StrCat(op, " recovery ", tally.recovered, "/", tally.total));
  }
  out.Check(variants > 0, "no postUpdate variants generated");
  out.Check(variant_strict == 0, absl::StrCat(variant_strict, " postUpdate variants recovered under strict matching"));
  out.Check(variant_lenient == variants,
            absl::StrCat(variant_lenient, "/", variants, " postUpdate variants recovered when lenient"));
  if (out.pass) {
    out.detail = absl::StrCat(run.corpus.sources.size(), " mutants parse; lowest recovery ",
                              lowest, " ", Ratio{static_cast<int64_t>(std::lround(worst * 10000)), 10000}.Percent(),
                              "; postUpdate variants 0/", variants, " strict, ", variant_lenient, "/",
                              variants, " lenient");
  }
  return out;
}

Outcome BruteForceEquivalence() {
  Outcome out;
  testing::brute::EquivalenceResult result = testing::brute::RunEquivalence(20261015, 1000);
  out.Check(result.cases >= 1000, "too few cases");
  out.Check(result.mismatches == 0, absl::StrCat(result.mismatches, " mismatches; first:\n",
                                                 result.first_mismatch));
  if (out.pass) out.detail = absl::StrCat(result.cases, " rulesets, both matching modes, 0 mismatches");
  return out;
}

bool Routed(const Finding& f) {
  return f.category == ThreatCategory::kWAC || f.category == ThreatCategory::kWTC;
}

void CheckConservation(const std::string& name, const SourceFile& source, Outcome* out,
                       int* routed_total) {
  RuleSet rules = ParseRuleSet(source);
  FindingReport report = DetectFile(rules, {});
  RuleTexts texts = CollectRuleTexts(source, rules);
  auto accept = MakeAcceptAllBackend();
  auto reject = MakeRejectAllBackend();
  auto accepted = RunHybrid(report, texts, {}, *accept);
  auto rejected = RunHybrid(report, texts, {}, *reject);
  out->Check(accepted.ok() && rejected.ok(), name + ": hybrid run failed");
  if (!accepted.ok() || !rejected.ok()) return;
  const FindingReport& a = accepted->reconciled.final_report;
  out->Check(RenderText(a) == RenderText(report) && RenderStructured(a) == RenderStructured(report),
             name + ": accept-all changed the report");
  std::vector<Finding> expected;
  for (const Finding& f : report.findings) {
    if (!Routed(f)) expected.push_back(f);
  }
  out->Check(rejected->reconciled.final_report.findings == expected,
             name + ": reject-all did not remove exactly the WAC and WTC findings");
  *routed_total += static_cast<int>(report.findings.size() - expected.size());
}

Outcome HybridConservation(const CorpusRun& run) {
  Outcome out;
  int routed = 0;
  CheckConservation("watering", testing::TestdataSource("watering/WateringSystem.rules"), &out, &routed);
  for (size_t i = 0; i < run.corpus.sources.size(); i += 7) {
    CheckConservation(run.corpus.manifest.records[i].mutant_id,
                      SourceFile(run.corpus.manifest.records[i].mutant_id + ".rules", run.corpus.sources[i]),
                      &out, &routed);
  }
  out.Check(routed > 0, "no routed findings exercised");

  testing::PrecisionFixture fx = testing::SeededPrecisionFixture();
  TableBackend table(fx.oracle_answers, "table");
  auto hybrid = RunHybrid(fx.report, {}, {}, table);
  out.Check(hybrid.ok(), "table run failed");
  if (!hybrid.ok()) return out;
  std::set<std::string> discarded;
  for (const Finding& f : hybrid->reconciled.discarded) discarded.insert(FindingId(fx.report.file, f));
  std::set<std::string> false_positives;
  for (const auto& [id, tp] : fx.truth) {
    if (!tp) false_positives.insert(id);
  }
  std::set<std::string> routed_fps;
  for (const Finding& f : fx.report.findings) {
    std::string id = FindingId(fx.report.file, f);
    if (Routed(f) && false_positives.count(id)) routed_fps.insert(id);
  }
  out.Check(discarded == routed_fps, "table stub did not discard exactly the labeled routed FPs");
  auto precision = HybridPrecision({fx.report}, {hybrid->reconciled.final_report}, fx.truth);
  out.Check(precision.ok(), "precision computation failed");
  if (!precision.ok()) return out;
  auto before = precision->before.total.precision();
  auto after = precision->after.total.precision();
  out.Check(before && before->Percent() == "72.53%", "baseline precision is not 72.53%");
  out.Check(after && after->value() >= 0.90, "hybrid precision below 0.90");
  if (out.pass) {
    out.detail = absl::StrCat(routed, " routed findings conserved; precision ", before->Percent(),
                              " -> ", after->Percent());
  }
  return out;
}

LabelSet Labels(std::vector<std::string> labels) { return {std::move(labels), std::nullopt}; }

Outcome ScoringProperties() {
  Outcome out;
  std::mt19937_64 rng(20261015);
  const auto& six = TaxonomyLabels(Taxonomy::kSixClass);
  int violations = 0;
  ConfusionTally single_tally, multi_tally;
  const int kCases = 10000;
  for (int i = 0; i < kCases; ++i) {
    std::set<std::string> chosen;
    int k = static_cast<int>(rng() % 4);
    for (int j = 0; j < k; ++j) chosen.insert(six[rng() % six.size()]);
    LabelSet prediction = Labels({chosen.begin(), chosen.end()});
    if (rng() % 20 == 0) prediction = LabelSet{{}, ParseFailure::kBlank};
    std::string truth = CategoryName(kAllCategories[rng() % 6]);
    bool single = ScorePrediction(prediction, truth, false);
    bool multi = ScorePrediction(prediction, truth, true);
    if (single && !multi) ++violations;
    single_tally.Add(truth, single);
    multi_tally.Add(truth, multi);
  }
  for (const ConfusionTally* tally : {&single_tally, &multi_tally}) {
    int64_t weighted = 0;
    int64_t total = 0;
    for (const auto& [label, recall] : PerClassRecall(*tally)) {
      weighted += recall.num;
      total += recall.den;
    }
    auto accuracy = MicroAccuracy(*tally);
    if (!accuracy.ok() || accuracy->num != weighted || accuracy->den != total || total != kCases) {
      ++violations;
    }
  }
  out.Check(violations == 0, absl::StrCat(violations, " violations"));
  if (out.pass) out.detail = absl::StrCat(kCases, " cases, 0 violations");
  return out;
}

class RecordingSleeper : public Sleeper {
 public:
  void SleepFor(Millis d) override {
    std::lock_guard<std::mutex> lock(mu_);
    delays.push_back(d);
  }
  std::vector<Millis> delays;

 private:
  std::mutex mu_;
};

struct ScriptRun {
  Completion completion;
  size_t requests = 0;
  std::vector<Millis> delays;
};

std::optional<ScriptRun> RunScript(const std::string& name) {
  auto script = testing::LoadScript(TestdataPath("mock/" + name));
  if (!script.ok()) return std::nullopt;
  testing::MockChatServer server(*script);
  BackendConfig config;
  config.endpoint = server.endpoint();
  config.model = "mock-model";
  config.api_key_required = false;
  config.timeout = Millis(2000);
  config.max_retries = 4;
  config.backoff_base = Millis(100);
  RecordingSleeper sleeper;
  ChatCompletionsBackend backend(config, "", MakeHttplibTransport(), sleeper, RealClock());
  auto completion = backend.Complete({"classify these rules", "classify", "i1"});
  if (!completion.ok()) return std::nullopt;
  return ScriptRun{*completion, server.requests().size(), sleeper.delays};
}

std::vector<int> Statuses(const CallRecord& record) {
  std::vector<int> out;
  for (const AttemptRecord& a : record.attempts) out.push_back(a.status);
  return out;
}

Outcome ClientRobustness() {
  Outcome out;
  auto limited = RunScript("rate_limited.json");
  out.Check(limited.has_value(), "rate_limited script failed to run");
  if (limited) {
    const CallRecord& r = limited->completion.record;
    out.Check(limited->completion.ok() && limited->completion.text == "WAC", "429,429,200 not ok(WAC)");
    out.Check(Statuses(r) == std::vector<int>{429, 429, 200} && limited->requests == 3,
              "429,429,200 attempt sequence differs");
    out.Check(r.attempts.size() == 3 && r.attempts[0].error == FailureClass::kRateLimited &&
                  r.attempts[1].error == FailureClass::kRateLimited && !r.attempts[2].error,
              "429 attempts not classed rate-limited");
    out.Check(limited->delays.size() == 2 && limited->delays[1] >= limited->delays[0],
              "backoff delays not non-decreasing");
  }
  auto blank = RunScript("blank_then_ok.json");
  out.Check(blank.has_value(), "blank_then_ok script failed to run");
  if (blank) {
    const CallRecord& r = blank->completion.record;
    out.Check(blank->completion.ok() && blank->completion.text == "WAC", "blank,200 not ok(WAC)");
    out.Check(Statuses(r) == std::vector<int>{200, 200} && blank->requests == 2,
              "blank,200 attempt sequence differs");
    out.Check(!r.attempts.empty() && r.attempts[0].error == FailureClass::kMalformedResponse,
              "blank attempt not classed as failed");
  }
  auto unauthorized = RunScript("unauthorized.json");
  out.Check(unauthorized.has_value(), "unauthorized script failed to run");
  if (unauthorized) {
    const CallRecord& r = unauthorized->completion.record;
    out.Check(r.exhausted == FailureClass::kAuth, "401 not exhausted(auth)");
    out.Check(Statuses(r) == std::vector<int>{401} && unauthorized->requests == 1 &&
                  unauthorized->delays.empty(),
              "401 was retried");
  }
  if (out.pass) out.detail = "(429,429,200) ok in 3, (blank,200) ok in 2, (401) auth in 1";
  return out;
}

}  // namespace
}  // namespace ritscan

int main() {
  using namespace ritscan;
  auto start = std::chrono::steady_clock::now();
  CorpusRun corpus = BuildCorpus();
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "taxonomy fixed points", TaxonomyFixedPoints},
      {2, "report golden file", ReportGolden},
      {3, "metrics oracle", MetricsOracle},
      {4, "mutation round trip", [&] { return MutationRoundTrip(corpus); }},
      {5, "brute-force equivalence", BruteForceEquivalence},
      {6, "hybrid conservation", [&] { return HybridConservation(corpus); }},
      {7, "scoring properties", ScoringProperties},
      {8, "client robustness", ClientRobustness},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome = c.run();
    failures += !outcome.pass;
    std::printf("%s %d %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.number, c.name,
                outcome.detail.c_str());
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), seconds);
  return failures == 0 ? 0 : 1;
}
