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

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace ritscan {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kLabelWidth = 16;
constexpr int kIdWidth = 8;
const char* const kRule = "------------------------------------------------";

constexpr ThreatCategory kCountOrder[] = {
    ThreatCategory::kSAC, ThreatCategory::kWAC, ThreatCategory::kSTC,
    ThreatCategory::kWTC, ThreatCategory::kSCC, ThreatCategory::kWCC};

std::string Pad(std::string text, size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string IdField(const std::string& id) {
  std::string field = absl::StrCat("[", id, "]:");
  return Pad(field, std::max<size_t>(kIdWidth, field.size() + 1));
}

// First line carries the label; the rest are joined with `joiner`.
void EvidenceLines(std::ostringstream& out, const std::string& label,
                   const std::vector<Evidence>& items, const std::string& joiner,
                   bool conditions, const std::string& empty_id,
                   const std::string& empty_text) {
  std::string head = absl::StrCat("        ", Pad(label + ":", kLabelWidth));
  if (items.empty()) {
    out << head << IdField(empty_id) << empty_text << "\n";
    return;
  }
  for (size_t i = 0; i < items.size(); ++i) {
    std::string text = conditions ? absl::StrCat("if (", items[i].text, ")")
                                  : items[i].text;
    out << (i == 0 ? head : joiner) << IdField(items[i].id) << text << "\n";
  }
}

const std::string kAndJoiner = std::string(20, ' ') + "AND ";
const std::string kOrJoiner = std::string(21, ' ') + "OR ";

void RenderFinding(std::ostringstream& out, size_t index, const Finding& f) {
  CoarseCategory family = Aggregate(f.category);
  out << index << ". " << CategoryName(f.category) << " THREAT DETECTED\n";
  out << "    THREAT PAIR: (" << f.source_id << ", "
      << absl::StrJoin(f.target_ids, ", ") << ")\n";
  if (!f.flags.empty()) {
    out << "    FLAGS: " << absl::StrJoin(f.flags, ", ") << "\n";
  }
  out << "    \n";
  out << "    RULES:\n";
  out << "        RULE_A [" << f.rule_a.id << "]: (\"" << f.rule_a.name << "\")\n";
  out << "        RULE_B [" << f.rule_b.id << "]: (\"" << f.rule_b.name << "\")\n";
  out << "\n";
  out << "    OVERLAPPING TRIGGERS:\n";
  EvidenceLines(out, "TRIGGERS_A", f.triggers_a, kOrJoiner, false, "t0",
                "no overlapping triggers");
  out << "        \n";
  EvidenceLines(out, "TRIGGERS_B", f.triggers_b, kOrJoiner, false, "t0",
                "no overlapping triggers");
  out << "\n";
  out << "    OVERLAPPING CONDITIONS:\n";
  EvidenceLines(out, "CONDITIONS_A", f.conditions_a, kAndJoiner, true, "c0",
                "no conditions guarding action ");
  out << "        \n";
  EvidenceLines(out, "CONDITIONS_B", f.conditions_b, kAndJoiner, true, "c0",
                family == CoarseCategory::kTC ? "no conditions in rule "
                                              : "no conditions guarding action ");
  out << "\n";
  std::vector<Evidence> action_a = {f.action_a};
  switch (family) {
    case CoarseCategory::kAC:
      out << "    CONTRADICTORY ACTIONS:\n";
      EvidenceLines(out, "ACTION_A", action_a, kAndJoiner, false, "a0", "");
      EvidenceLines(out, "ACTION_B", f.targets_b, kAndJoiner, false, "a0", "");
      break;
    case CoarseCategory::kTC:
      out << "    CASCADING ACTION:\n";
      EvidenceLines(out, "ACTION_A", action_a, kAndJoiner, false, "a0", "");
      EvidenceLines(out, "TRIGGER_B", f.targets_b, kOrJoiner, false, "t0", "");
      break;
    case CoarseCategory::kCC:
      out << "    ENABLING ACTION:\n";
      EvidenceLines(out, "ACTION_A", action_a, kAndJoiner, false, "a0", "");
      EvidenceLines(out, "ENABLED_B", f.targets_b, kAndJoiner, true, "c0", "");
      break;
  }
  out << "\n";
  out << "    THREAT DESCRIPTION: \n";
  for (absl::string_view line : absl::StrSplit(f.description, '\n')) {
    out << "    " << line << "\n";
  }
  out << "\n";
}

Json EvidenceJson(const std::vector<Evidence>& items) {
  Json out = Json::array();
  for (const Evidence& e : items) out.push_back({{"id", e.id}, {"text", e.text}});
  return out;
}

Json ReportJson(const FindingReport& report) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["file"] = report.file;
  CategoryCounts counts = report.Counts();
  Json counts_json = Json::object();
  for (ThreatCategory c : kCountOrder) counts_json[CategoryName(c)] = counts.Of(c);
  doc["counts"] = counts_json;
  Json findings = Json::array();
  for (const Finding& f : report.findings) {
    Json pairs = Json::array();
    for (const auto& [a, b] : f.trigger_pairs) pairs.push_back({a, b});
    findings.push_back({
        {"key", f.Key()},
        {"category", CategoryName(f.category)},
        {"coarse", CoarseName(Aggregate(f.category))},
        {"rule_a", {{"id", f.rule_a.id}, {"name", f.rule_a.name}}},
        {"rule_b", {{"id", f.rule_b.id}, {"name", f.rule_b.name}}},
        {"source_id", f.source_id},
        {"target_ids", f.target_ids},
        {"trigger_pairs", pairs},
        {"triggers_a", EvidenceJson(f.triggers_a)},
        {"triggers_b", EvidenceJson(f.triggers_b)},
        {"conditions_a", EvidenceJson(f.conditions_a)},
        {"conditions_b", EvidenceJson(f.conditions_b)},
        {"action_a", {{"id", f.action_a.id}, {"text", f.action_a.text}}},
        {"targets_b", EvidenceJson(f.targets_b)},
        {"description", f.description},
        {"flags", f.flags},
    });
  }
  doc["findings"] = findings;
  return doc;
}

Evidence EvidenceFromJson(const Json& j) {
  return {j.at("id").get<std::string>(), j.at("text").get<std::string>()};
}

std::vector<Evidence> EvidenceListFromJson(const Json& j) {
  std::vector<Evidence> out;
  for (const Json& e : j) out.push_back(EvidenceFromJson(e));
  return out;
}

absl::StatusOr<FindingReport> ReportFromJson(const Json& doc) {
  if (!doc.is_object()) return absl::InvalidArgumentError("report is not an object");
  if (doc.value("schema_version", 0) != kReportSchemaVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unsupported report schema_version ",
        doc.contains("schema_version") ? doc["schema_version"].dump() : "(missing)"));
  }
  FindingReport report;
  report.file = doc.at("file").get<std::string>();
  for (const Json& j : doc.at("findings")) {
    Finding f;
    auto category = ParseCategory(j.at("category").get<std::string>());
    if (!category) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown category ", j.at("category").dump()));
    }
    f.category = *category;
    f.rule_a = {j.at("rule_a").at("id").get<std::string>(),
                j.at("rule_a").at("name").get<std::string>()};
    f.rule_b = {j.at("rule_b").at("id").get<std::string>(),
                j.at("rule_b").at("name").get<std::string>()};
    f.source_id = j.at("source_id").get<std::string>();
    f.target_ids = j.at("target_ids").get<std::vector<std::string>>();
    for (const Json& p : j.at("trigger_pairs")) {
      f.trigger_pairs.emplace_back(p.at(0).get<std::string>(),
                                   p.at(1).get<std::string>());
    }
    f.triggers_a = EvidenceListFromJson(j.at("triggers_a"));
    f.triggers_b = EvidenceListFromJson(j.at("triggers_b"));
    f.conditions_a = EvidenceListFromJson(j.at("conditions_a"));
    f.conditions_b = EvidenceListFromJson(j.at("conditions_b"));
    f.action_a = EvidenceFromJson(j.at("action_a"));
    f.targets_b = EvidenceListFromJson(j.at("targets_b"));
    f.description = j.at("description").get<std::string>();
    f.flags = j.value("flags", std::vector<std::string>{});
    if (j.contains("key") && j["key"].get<std::string>() != f.Key()) {
      return absl::InvalidArgumentError(
          absl::StrCat("finding key ", j["key"].dump(),
                       " does not match its evidence (", f.Key(), ")"));
    }
    report.findings.push_back(std::move(f));
  }
  if (doc.contains("counts")) {
    CategoryCounts counts = report.Counts();
    for (ThreatCategory c : kAllCategories) {
      int declared = doc["counts"].value(CategoryName(c), 0);
      if (declared != counts.Of(c)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "count for ", CategoryName(c), " is ", declared, " but ",
            counts.Of(c), " findings are listed"));
      }
    }
  }
  return report;
}

}  // namespace

std::string RenderText(const FindingReport& report) {
  std::ostringstream out;
  CategoryCounts counts = report.Counts();
  out << "FILE: " << report.file << "\n";
  out << kRule << "\n";
  out << "THREATS DETECTED: " << counts.Total() << "\n";
  for (ThreatCategory c : kCountOrder) {
    out << CategoryName(c) << ": " << counts.Of(c) << "\n";
  }
  out << kRule << "\n";
  out << "\n";
  for (size_t i = 0; i < report.findings.size(); ++i) {
    RenderFinding(out, i + 1, report.findings[i]);
  }
  return out.str();
}

std::string RenderStructured(const FindingReport& report) {
  return ReportJson(report).dump(2) + "\n";
}

std::string RenderStructuredLine(const FindingReport& report) {
  return ReportJson(report).dump();
}

absl::StatusOr<FindingReport> ParseStructured(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("report is not valid JSON");
  }
  try {
    return ReportFromJson(doc);
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
}

absl::StatusOr<std::vector<FindingReport>> ParseStructuredLines(
    const std::string& text) {
  std::vector<FindingReport> reports;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    auto report = ParseStructured(std::string(line));
    if (!report.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": ", report.status().message()));
    }
    reports.push_back(*std::move(report));
  }
  return reports;
}

}  // namespace ritscan
