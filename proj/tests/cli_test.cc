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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "ritscan/config.h"
#include "ritscan/report.h"
#include "support/mock_chat_server.h"
#include "support/report_fixtures.h"
#include "support/testdata.h"

namespace ritscan::cli {
namespace {

namespace fs = std::filesystem;
using ::ritscan::testing::SeedDir;
using ::ritscan::testing::TestdataPath;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path TempDir(const std::string& name) {
  fs::path dir = fs::path(::testing::TempDir()) / ("ritscan_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteFile(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

int Count(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (size_t at = haystack.find(needle); at != std::string::npos;
       at = haystack.find(needle, at + 1)) {
    ++n;
  }
  return n;
}

TEST(Detect, BenignFileExitsClean) {
  CliRun r = Cli({"detect", SeedDir() + "/01_lighting.rules"});
  EXPECT_EQ(r.code, kExitClean) << r.err;
  EXPECT_NE(r.out.find("THREATS DETECTED: 0"), std::string::npos);
}

TEST(Detect, FindingsExitOne) {
  CliRun r = Cli({"detect", TestdataPath("taxonomy/window_lock_contradiction.rules")});
  EXPECT_EQ(r.code, kExitFindings);
  EXPECT_EQ(Count(r.out, "THREAT DETECTED\n"), 1);
  EXPECT_NE(r.out.find("1. SAC THREAT DETECTED"), std::string::npos);
  EXPECT_TRUE(r.err.empty()) << r.err;
}

TEST(Detect, MissingFileIsFatal) {
  CliRun r = Cli({"detect", "/nonexistent/x.rules"});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("/nonexistent/x.rules"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Detect, SyntaxErrorIsFatalWithDiagnostic) {
  fs::path dir = TempDir("syntax");
  WriteFile(dir / "bad.rules", "rule \"x\"\nwhen\nthen\nend\n");
  CliRun r = Cli({"detect", (dir / "bad.rules").string()});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("bad.rules:"), std::string::npos);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Detect, DirectoriesAreSearchedRecursively) {
  fs::path dir = TempDir("tree");
  fs::create_directories(dir / "nested" / "deeper");
  fs::copy_file(SeedDir() + "/01_lighting.rules", dir / "a.rules");
  fs::copy_file(TestdataPath("taxonomy/window_lock_contradiction.rules"), dir / "nested" / "deeper" / "b.rules");
  WriteFile(dir / "nested" / "notes.txt", "not rules");
  CliRun r = Cli({"detect", dir.string(), "--format", "structured"});
  EXPECT_EQ(r.code, kExitFindings);
  auto reports = ParseStructuredLines(r.out);
  ASSERT_TRUE(reports.ok()) << reports.status();
  ASSERT_EQ(reports->size(), 2u);
  EXPECT_EQ((*reports)[0].file, (dir / "a.rules").string());
  EXPECT_EQ((*reports)[1].file, (dir / "nested" / "deeper" / "b.rules").string());
  EXPECT_EQ((*reports)[1].Counts().Of(ThreatCategory::kSAC), 1);
  fs::remove_all(dir);
}

TEST(Detect, LenientMatchingFiresCommandTriggersOnUpdates) {
  fs::path dir = TempDir("lenient");
  WriteFile(dir / "p.rules",
            "rule \"A\"\nwhen\n    Item Door changed to OPEN\nthen\n"
            "    postUpdate(Hall_Light, ON)\nend\n\n"
            "rule \"B\"\nwhen\n    Item Hall_Light received command ON\nthen\n"
            "    Hall_Fan.sendCommand(ON)\nend\n");
  EXPECT_EQ(Cli({"detect", (dir / "p.rules").string()}).code, kExitClean);
  CliRun lenient = Cli({"detect", (dir / "p.rules").string(), "--lenient"});
  EXPECT_EQ(lenient.code, kExitFindings);
  EXPECT_NE(lenient.out.find("STC: 1"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Mutate, WritesCorpusAndReportsRecovery) {
  fs::path dir = TempDir("mutate");
  CliRun r = Cli({"mutate", SeedDir(), "--out", (dir / "corpus").string(), "--recovery",
               "--format", "structured"});
  ASSERT_EQ(r.code, kExitClean) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["mutants"].get<int>(), 0);
  EXPECT_TRUE(fs::exists(dir / "corpus" / "manifest.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "corpus" / "summary.json"));
  for (auto& [op, t] : j["recovery"].items()) {
    EXPECT_EQ(t["recovered"], t["total"]) << op;
  }
  fs::remove_all(dir);
}

TEST(Mutate, SamplingNeedsExplicitSeedAndIsReproducible) {
  fs::path dir = TempDir("sample");
  EXPECT_EQ(Cli({"mutate", SeedDir(), "--out", dir.string(), "--sample", "5"}).code, kExitFatal);
  EXPECT_EQ(Cli({"mutate", SeedDir(), "--out", dir.string(), "--seed", "5"}).code, kExitFatal);
  std::string manifests[2];
  for (int i = 0; i < 2; ++i) {
    fs::path out = dir / std::to_string(i);
    CliRun r = Cli({"mutate", SeedDir(), "--out", out.string(), "--sample", "12", "--seed", "99",
                 "--operators", "SAC,WTC,STC-postUpdate"});
    ASSERT_EQ(r.code, kExitClean) << r.err;
    std::ifstream in(out / "manifest.jsonl");
    manifests[i].assign(std::istreambuf_iterator<char>(in), {});
  }
  EXPECT_EQ(manifests[0], manifests[1]);
  EXPECT_EQ(Count(manifests[0], "\n"), 12);
  EXPECT_EQ(Cli({"mutate", SeedDir(), "--out", dir.string(), "--operators", "XYZ"}).code,
            kExitFatal);
  fs::remove_all(dir);
}

class AdjudicateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = TempDir("adjudicate");
    rules_ = TestdataPath("watering/WateringSystem.rules");
    CliRun detect = Cli({"detect", rules_});
    ASSERT_EQ(detect.code, kExitFindings);
    detect_text_ = detect.out;
    CliRun structured = Cli({"detect", rules_, "--format", "structured"});
    report_path_ = (dir_ / "report.json").string();
    WriteFile(report_path_, structured.out);
    auto parsed = ParseStructured(structured.out);
    ASSERT_TRUE(parsed.ok());
    report_ = *parsed;
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string rules_;
  std::string detect_text_;
  std::string report_path_;
  FindingReport report_;
};

TEST_F(AdjudicateTest, AcceptAllIsByteIdentical) {
  CliRun r = Cli({"adjudicate", report_path_, "--stub", "accept-all"});
  EXPECT_EQ(r.code, kExitClean) << r.err;
  EXPECT_EQ(r.out, detect_text_);
}

TEST_F(AdjudicateTest, RejectAllDropsRoutedFindings) {
  std::string audit = (dir_ / "audit.jsonl").string();
  CliRun r = Cli({"adjudicate", report_path_, "--stub", "reject-all", "--format", "structured",
               "--audit", audit});
  ASSERT_EQ(r.code, kExitClean) << r.err;
  auto final_report = ParseStructured(r.out);
  ASSERT_TRUE(final_report.ok());
  std::vector<Finding> expected;
  int routed_subtasks = 0;
  for (const Finding& f : report_.findings) {
    if (f.category == ThreatCategory::kWAC || f.category == ThreatCategory::kWTC) {
      routed_subtasks += f.category == ThreatCategory::kWAC ? 2 : 1;
    } else {
      expected.push_back(f);
    }
  }
  EXPECT_EQ(final_report->findings, expected);
  std::ifstream in(audit);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(Count(all, "\n"), routed_subtasks);
}

TEST_F(AdjudicateTest, TableStubAndRoutedOverride) {
  const Finding first = report_.findings.front();
  nlohmann::json answers = nlohmann::json::object();
  for (const Finding& f : report_.findings) {
    if (f.category == first.category) answers[f.Key()] = f.Key() == first.Key() ? "NO" : "YES";
  }
  std::string table = (dir_ / "table.json").string();
  WriteFile(table, answers.dump());
  CliRun r = Cli({"adjudicate", report_path_, "--stub", "table:" + table, "--routed",
                  CategoryName(first.category), "--max-in-flight", "1", "--format",
                  "structured"});
  ASSERT_EQ(r.code, kExitClean) << r.err;
  auto final_report = ParseStructured(r.out);
  ASSERT_TRUE(final_report.ok());
  std::vector<Finding> expected;
  for (const Finding& f : report_.findings) {
    if (f.Key() != first.Key()) expected.push_back(f);
  }
  EXPECT_EQ(final_report->findings, expected);

  WriteFile(table, "{}");
  CliRun missing = Cli({"adjudicate", report_path_, "--stub", "table:" + table});
  EXPECT_EQ(missing.code, kExitFatal);
  EXPECT_NE(missing.err.find("has no entry for"), std::string::npos) << missing.err;
}

TEST_F(AdjudicateTest, OutageFailsOpenWithWarning) {
  testing::MockChatServer server(std::vector<testing::ScriptedResponse>(64, {503}));
  std::string config = (dir_ / "config.json").string();
  WriteFile(config, nlohmann::json{{"backend",
                                    {{"endpoint", server.endpoint()},
                                     {"api_key_env", "RITSCAN_CLI_TEST_KEY"},
                                     {"max_retries", 1},
                                     {"backoff_base_ms", 1}}}}
                        .dump());
  ::setenv("RITSCAN_CLI_TEST_KEY", "sk-test", 1);
  CliRun r = Cli({"adjudicate", report_path_, "--config", config, "--format", "structured"});
  ::unsetenv("RITSCAN_CLI_TEST_KEY");
  EXPECT_EQ(r.code, kExitClean) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  auto final_report = ParseStructured(r.out);
  ASSERT_TRUE(final_report.ok()) << final_report.status();
  ASSERT_EQ(final_report->findings.size(), report_.findings.size());
  for (const Finding& f : final_report->findings) {
    bool routed = f.category == ThreatCategory::kWAC || f.category == ThreatCategory::kWTC;
    EXPECT_EQ(f.flags.size(), routed ? 1u : 0u);
  }
  EXPECT_EQ(server.requests().at(0).authorization, "Bearer sk-test");
}

TEST_F(AdjudicateTest, MissingApiKeyIsFatal) {
  std::string config = (dir_ / "config.json").string();
  WriteFile(config, R"({"backend": {"api_key_env": "RITSCAN_CLI_UNSET_KEY"}})");
  ::unsetenv("RITSCAN_CLI_UNSET_KEY");
  CliRun r = Cli({"adjudicate", report_path_, "--config", config});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("RITSCAN_CLI_UNSET_KEY"), std::string::npos);
}

TEST_F(AdjudicateTest, RejectsNonReportInput) {
  CliRun r = Cli({"adjudicate", rules_, "--stub", "accept-all"});
  EXPECT_EQ(r.code, kExitFatal);
}

class EvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = TempDir("eval");
    CliRun r = Cli({"mutate", SeedDir(), "--out", (dir_ / "corpus").string(), "--sample", "30",
                 "--seed", "4"});
    ASSERT_EQ(r.code, kExitClean) << r.err;
    manifest_ = (dir_ / "corpus" / "manifest.jsonl").string();
    std::ifstream in(manifest_);
    std::string line;
    while (std::getline(in, line)) {
      auto j = nlohmann::json::parse(line);
      ids_.push_back(j["mutant_id"]);
      fine_.push_back(j["fine"]);
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string manifest_;
  std::vector<std::string> ids_;
  std::vector<std::string> fine_;
};

TEST_F(EvalTest, EchoStubScoresPerfectly) {
  CliRun r = Cli({"eval", "--manifest", manifest_, "--stub", "echo", "--experiment", "B"});
  ASSERT_EQ(r.code, kExitClean) << r.err;
  EXPECT_NE(r.out.find("ACCURACY: 30/30 100.00%"), std::string::npos) << r.out;
}

TEST_F(EvalTest, ResponsesAndReplayAgree) {
  std::string responses = (dir_ / "responses.jsonl").string();
  {
    std::ofstream out(responses);
    for (size_t i = 0; i < ids_.size(); ++i) {
      std::string answer = i % 3 == 0 ? "WAC,STC" : (i % 3 == 1 ? fine_[i] : "");
      out << nlohmann::json{{"instance_id", ids_[i]}, {"response", answer}}.dump() << "\n";
    }
  }
  std::string log = (dir_ / "log.jsonl").string();
  CliRun live = Cli({"eval", "--manifest", manifest_, "--responses", responses, "--log-out", log,
                  "--format", "structured"});
  ASSERT_EQ(live.code, kExitClean) << live.err;
  CliRun replay = Cli({"eval", "--manifest", manifest_, "--replay", log, "--format", "structured"});
  ASSERT_EQ(replay.code, kExitClean) << replay.err;
  EXPECT_EQ(live.out, replay.out);
  EXPECT_EQ(nlohmann::json::parse(live.out)["parse_failures"], 10);
}

TEST_F(EvalTest, OrphansAreListed) {
  std::string responses = (dir_ / "responses.jsonl").string();
  {
    std::ofstream out(responses);
    for (size_t i = 1; i < ids_.size(); ++i) {
      out << nlohmann::json{{"instance_id", ids_[i]}, {"response", "WAC"}}.dump() << "\n";
    }
    out << R"({"instance_id": "stranger", "response": "WAC"})" << "\n";
  }
  CliRun r = Cli({"eval", "--manifest", manifest_, "--responses", responses});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("manifest-only: " + ids_[0]), std::string::npos);
  EXPECT_NE(r.err.find("prediction-only: stranger"), std::string::npos);
}

TEST_F(EvalTest, PredictorRequired) {
  EXPECT_EQ(Cli({"eval", "--manifest", manifest_}).code, kExitFatal);
  EXPECT_EQ(Cli({"eval", "--manifest", manifest_, "--stub", "echo", "--live"}).code, kExitFatal);
  EXPECT_EQ(Cli({"eval", "--manifest", manifest_, "--stub", "echo", "--shots", "3"}).code,
            kExitFatal);
}

TEST(Precision, SeededFixtureTable) {
  fs::path dir = TempDir("precision");
  testing::PrecisionFixture fx = testing::SeededPrecisionFixture();
  WriteFile(dir / "before.json", RenderStructured(fx.report));
  {
    std::ofstream truth(dir / "truth.jsonl");
    for (const auto& [id, tp] : fx.truth) {
      truth << nlohmann::json{{"finding", id}, {"true_positive", tp}}.dump() << "\n";
    }
  }
  WriteFile(dir / "table.json", nlohmann::json(fx.oracle_answers).dump());
  CliRun adjudicated = Cli({"adjudicate", (dir / "before.json").string(), "--stub",
                         "table:" + (dir / "table.json").string(), "--format", "structured"});
  ASSERT_EQ(adjudicated.code, kExitClean) << adjudicated.err;
  WriteFile(dir / "after.json", adjudicated.out);
  CliRun r = Cli({"precision", "--truth", (dir / "truth.jsonl").string(), "--before",
               (dir / "before.json").string(), "--after", (dir / "after.json").string()});
  ASSERT_EQ(r.code, kExitClean) << r.err;
  EXPECT_NE(r.out.find("72.53%\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("95.65%\n"), std::string::npos) << r.out;
  fs::remove_all(dir);
}

TEST(Config, DefaultsRoundTrip) {
  CliRun r = Cli({"config"});
  ASSERT_EQ(r.code, kExitClean);
  auto parsed = ParseToolConfig(r.out);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(ToolConfigJson(*parsed), r.out);
  EXPECT_EQ(ToolConfigJson(ToolConfig{}), r.out);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["backend"]["temperature"], 0.2);
  EXPECT_EQ(j["backend"]["top_p"], 0.95);
  EXPECT_EQ(j["backend"]["max_output_tokens"], 2048);
  EXPECT_EQ(j["backend"]["api_key_env"], "RITSCAN_API_KEY");
  EXPECT_EQ(j["strict_event_matching"], true);
  EXPECT_EQ(j["routed_set"], nlohmann::json({"WAC", "WTC"}));
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_FALSE(ParseToolConfig(R"({"strict": true})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"backend": {"temp": 0.1}})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"prompt": {"shots": 1, "extra": 0}})").ok());
  auto error = ParseToolConfig(R"({"backend": {"api_key": "sk"}})");
  EXPECT_NE(std::string(error.status().message()).find("unknown key 'api_key'"),
            std::string::npos);
}

TEST(Config, TypesAndRangesChecked) {
  EXPECT_FALSE(ParseToolConfig(R"({"strict_event_matching": "yes"})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"routed_set": ["WAC", "XYZ"]})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"max_in_flight": 0})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"format": "xml"})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"prompt": {"shots": 5}})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"prompt": {"taxonomy": "nine-class"}})").ok());
  EXPECT_FALSE(ParseToolConfig(R"({"backend": {"top_p": 2}})").ok());
  EXPECT_FALSE(ParseToolConfig("[]").ok());
  auto ok = ParseToolConfig(
      R"({"routed_set": [], "format": "structured", "prompt": {"taxonomy": "three-class"},
          "backend": {"timeout_ms": 500, "jitter_seed": 7}})");
  ASSERT_TRUE(ok.ok()) << ok.status();
  EXPECT_TRUE(ok->routed.empty());
  EXPECT_EQ(ok->format, OutputFormat::kStructured);
  EXPECT_EQ(ok->prompt.taxonomy, Taxonomy::kThreeClass);
  EXPECT_EQ(ok->backend.timeout, Millis(500));
  EXPECT_EQ(ok->backend.jitter_seed, 7u);
}

TEST(Config, InvalidFileIsFatal) {
  fs::path dir = TempDir("config");
  WriteFile(dir / "c.json", R"({"colour": "blue"})");
  CliRun r = Cli({"detect", SeedDir(), "--config", (dir / "c.json").string()});
  EXPECT_EQ(r.code, kExitFatal);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Help, EveryFlagIsDocumented) {
  std::vector<FlagDoc> docs = DescribeFlags();
  std::set<std::string> subcommands;
  for (const FlagDoc& doc : docs) subcommands.insert(doc.subcommand);
  EXPECT_EQ(subcommands, (std::set<std::string>{"adjudicate", "config", "detect", "eval",
                                                "mutate", "precision"}));
  for (const FlagDoc& doc : docs) {
    EXPECT_FALSE(doc.description.empty()) << doc.subcommand << " " << doc.flag;
    CliRun help = Cli({doc.subcommand, "--help"});
    EXPECT_EQ(help.code, kExitClean);
    EXPECT_NE(help.out.find(doc.flag), std::string::npos) << doc.subcommand << " " << doc.flag;
    EXPECT_NE(help.out.find(doc.description.substr(0, 30)), std::string::npos)
        << doc.subcommand << " " << doc.flag;
  }
  for (const char* flag : {"--format", "--config"}) {
    for (const std::string& sub : subcommands) {
      EXPECT_NE(Cli({sub, "--help"}).out.find(flag), std::string::npos) << sub;
    }
  }
}

TEST(Help, TopLevelUsage) {
  CliRun help = Cli({"--help"});
  EXPECT_EQ(help.code, kExitClean);
  for (const char* sub : {"detect", "mutate", "adjudicate", "eval", "precision", "config"}) {
    EXPECT_NE(help.out.find(sub), std::string::npos);
  }
  EXPECT_EQ(Cli({}).code, kExitFatal);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitFatal);
  EXPECT_EQ(Cli({"detect", "--format", "xml", SeedDir()}).code, kExitFatal);
}

}  // namespace
}  // namespace ritscan::cli
