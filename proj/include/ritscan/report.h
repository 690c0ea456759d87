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

// Text and structured renderings of finding reports.

#ifndef RITSCAN_REPORT_H_
#define RITSCAN_REPORT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ritscan/detector.h"

namespace ritscan {

inline constexpr int kReportSchemaVersion = 1;

// The fixed-column layout: a FILE header, category counts in the order
// SAC, WAC, STC, WTC, SCC, WCC, then one numbered block per finding.
std::string RenderText(const FindingReport& report);

// One indented JSON document carrying `schema_version`.
std::string RenderStructured(const FindingReport& report);
// The same document on a single line, for line-delimited output.
std::string RenderStructuredLine(const FindingReport& report);

// Accepts the output of either renderer. Rejects unknown schema versions
// and counts that disagree with the findings.
absl::StatusOr<FindingReport> ParseStructured(const std::string& text);

// Reads every nonblank line as a report.
absl::StatusOr<std::vector<FindingReport>> ParseStructuredLines(
    const std::string& text);

}  // namespace ritscan

#endif  // RITSCAN_REPORT_H_
