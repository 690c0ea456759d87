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

#include "ritscan/report.h"

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ritscan/detector.h"
#include "support/report_fixtures.h"
#include "support/testdata.h"

namespace ritscan {
namespace {

using ::ritscan::testing::ParseTestdata;
using ::ritscan::testing::ReadTestdata;

TEST(RenderTextTest, EmptyReport) {
  FindingReport report;
  report.file = "empty.rules";
  EXPECT_EQ(RenderText(report),
            "FILE: empty.rules\n"
            "------------------------------------------------\n"
            "THREATS DETECTED: 0\n"
            "SAC: 0\nWAC: 0\nSTC: 0\nWTC: 0\nSCC: 0\nWCC: 0\n"
            "------------------------------------------------\n\n");
}

TEST(RenderTextTest, GoldenWacFinding) {
  EXPECT_EQ(RenderText(testing::WateringWacReport()),
            ReadTestdata("golden/wac_report.txt"));
}

TEST(RenderTextTest, DetectedWateringFindingMatchesGolden) {
  FindingReport detected = DetectFile(ParseTestdata("watering/WateringSystem.rules"), {});
  FindingReport single;
  single.file = "detect-output\\oh-rules\\WateringSystem.rules";
  for (const Finding& f : detected.findings) {
    if (f.Key() == "WAC:r1a1>r7a7") single.findings.push_back(f);
  }
  ASSERT_EQ(single.findings.size(), 1u);
  EXPECT_EQ(RenderText(single), ReadTestdata("golden/wac_report.txt"));
}

TEST(RenderTextTest, BlockHeaderAndNoGuardLine) {
  std::string text = RenderText(testing::WateringWacReport());
  EXPECT_NE(text.find("1. WAC THREAT DETECTED\n    THREAT PAIR: (r1a1, r7a7)\n"),
            std::string::npos);
  EXPECT_NE(text.find("[c0]:   no conditions guarding action \n"), std::string::npos);
}

TEST(RenderTextTest, CascadeBlocks) {
  FindingReport tc = DetectFile(ParseTestdata("taxonomy/foyer_light_cascade.rules"), {});
  std::string text = RenderText(tc);
  EXPECT_NE(text.find("WTC: 1\n"), std::string::npos);
  EXPECT_NE(text.find("    CASCADING ACTION:\n"
                      "        ACTION_A:       [r1a2]: sendCommand(Foyer_Light, ON)\n"
                      "        TRIGGER_B:      [r2t1]: Foyer_Light changed to ON\n"),
            std::string::npos)
      << text;
  EXPECT_NE(text.find("        CONDITIONS_B:   [r2c1]: if (time >= 8:00 && time <= 9:00)\n"),
            std::string::npos);

  FindingReport cc = DetectFile(ParseTestdata("taxonomy/window_lock_enablement.rules"), {});
  std::string cc_text = RenderText(cc);
  EXPECT_NE(cc_text.find("    ENABLING ACTION:\n"
                         "        ACTION_A:       [r1a1]: sendCommand(window_Lock, OFF)\n"
                         "        ENABLED_B:      [r2c1]: if (window_Lock == OFF)\n"),
            std::string::npos)
      << cc_text;
}

TEST(RenderTextTest, MultipleTriggersUseOrLines) {
  FindingReport report = DetectFile(
      testing::ParseText("rule \"a\" when Item P changed or Item Q changed then\n"
                         "  sendCommand(X, ON)\nend\n"
                         "rule \"b\" when Item R changed then sendCommand(X, OFF) end\n"),
      {});
  std::string text = RenderText(report);
  EXPECT_NE(text.find("        TRIGGERS_A:     [r1t1]: Item P changed\n"
                      "                     OR [r1t2]: Item Q changed\n"),
            std::string::npos)
      << text;
}

TEST(RenderTextTest, CountsMatchFindings) {
  FindingReport report = DetectFile(ParseTestdata("watering/WateringSystem.rules"), {});
  std::string text = RenderText(report);
  CategoryCounts counts = report.Counts();
  for (ThreatCategory c : kAllCategories) {
    std::string line = std::string(CategoryName(c)) + ": " +
                       std::to_string(counts.Of(c)) + "\n";
    EXPECT_NE(text.find(line), std::string::npos) << line;
  }
  EXPECT_EQ(RenderText(report), text);
}

TEST(RenderStructuredTest, RoundTrip) {
  FindingReport report = DetectFile(ParseTestdata("watering/WateringSystem.rules"), {});
  report.findings[0].flags = {"adjudication-unavailable"};
  auto parsed = ParseStructured(RenderStructured(report));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, report);
  auto line = ParseStructured(RenderStructuredLine(report));
  ASSERT_TRUE(line.ok());
  EXPECT_EQ(*line, report);
  EXPECT_EQ(RenderStructuredLine(report).find('\n'), std::string::npos);
}

TEST(RenderStructuredTest, CountsAreIntegers) {
  std::string doc = RenderStructuredLine(testing::WateringWacReport());
  EXPECT_NE(doc.find("\"counts\":{\"SAC\":0,\"WAC\":1,\"STC\":0,\"WTC\":0,\"SCC\":0,"
                     "\"WCC\":0}"),
            std::string::npos)
      << doc;
  EXPECT_NE(doc.find("\"schema_version\":1"), std::string::npos);
}

TEST(RenderStructuredTest, RejectsBadDocuments) {
  EXPECT_FALSE(ParseStructured("not json").ok());
  EXPECT_FALSE(ParseStructured("{\"schema_version\": 2, \"file\": \"x\", "
                               "\"findings\": []}")
                   .ok());
  EXPECT_FALSE(ParseStructured("{\"schema_version\": 1, \"file\": \"x\", "
                               "\"counts\": {\"WAC\": 1}, \"findings\": []}")
                   .ok());
  EXPECT_FALSE(ParseStructured("{\"schema_version\": 1}").ok());
}

// Fuzzed round trip: arbitrary ids and texts survive verbatim.
TEST(RenderStructuredTest, FuzzedRoundTrip) {
  std::mt19937 rng(7);
  auto text = [&rng](int max_len) {
    static const std::string alphabet =
        "abcXYZ019 _-\"\\/\t\n{}[]:,\xc3\xa9";
    std::string s;
    int n = std::uniform_int_distribution<int>(0, max_len)(rng);
    for (int i = 0; i < n; ++i) {
      s.push_back(alphabet[std::uniform_int_distribution<size_t>(
          0, alphabet.size() - 3)(rng)]);
    }
    if (n % 3 == 0) s += "\xc3\xa9";
    return s;
  };
  auto evidence = [&](int max) {
    std::vector<Evidence> out;
    int n = std::uniform_int_distribution<int>(0, max)(rng);
    for (int i = 0; i < n; ++i) out.push_back({text(6), text(20)});
    return out;
  };
  for (int round = 0; round < 200; ++round) {
    FindingReport report;
    report.file = text(12);
    int n = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n; ++i) {
      Finding f;
      f.category = kAllCategories[std::uniform_int_distribution<size_t>(0, 5)(rng)];
      f.rule_a = {text(4), text(10)};
      f.rule_b = {text(4), text(10)};
      f.source_id = text(5);
      f.target_ids = {text(5), text(5)};
      f.trigger_pairs = {{text(4), text(4)}};
      f.triggers_a = evidence(2);
      f.triggers_b = evidence(2);
      f.conditions_a = evidence(3);
      f.conditions_b = evidence(3);
      f.action_a = {text(4), text(12)};
      f.targets_b = evidence(2);
      f.description = text(30);
      if (i % 2) f.flags = {text(8)};
      report.findings.push_back(f);
    }
    auto parsed = ParseStructured(RenderStructured(report));
    ASSERT_TRUE(parsed.ok()) << parsed.status();
    EXPECT_EQ(*parsed, report);
  }
}

TEST(RenderStructuredTest, LinesVariant) {
  FindingReport a = testing::WateringWacReport();
  FindingReport b;
  b.file = "other.rules";
  std::string lines = RenderStructuredLine(a) + "\n\n" + RenderStructuredLine(b) + "\n";
  auto parsed = ParseStructuredLines(lines);
  ASSERT_TRUE(parsed.ok());
  ASSERT_EQ(parsed->size(), 2u);
  EXPECT_EQ((*parsed)[0], a);
  EXPECT_EQ((*parsed)[1], b);
}

}  // namespace
}  // namespace ritscan
