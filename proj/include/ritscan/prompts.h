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

// Classification prompts for rule interaction threats and extraction of
// threat labels from free-form model output.

#ifndef RITSCAN_PROMPTS_H_
#define RITSCAN_PROMPTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace ritscan {

enum class Taxonomy { kSixClass, kThreeClass };

const char* TaxonomyName(Taxonomy taxonomy);  // "six-class", "three-class"
std::optional<Taxonomy> ParseTaxonomy(std::string_view name);

// Labels in report order: WAC SAC WTC STC WCC SCC, or AC TC CC.
const std::vector<std::string>& TaxonomyLabels(Taxonomy taxonomy);

struct PromptTemplate {
  int shots = 0;  // examples per category, 0..2
  Taxonomy taxonomy = Taxonomy::kSixClass;
  bool multi_response = true;

  absl::Status Validate() const;
  bool operator==(const PromptTemplate&) const = default;
};

// Preamble, threat definitions with `shots` examples per category, output
// format, then the rules to classify.
absl::StatusOr<std::string> BuildPrompt(const PromptTemplate& tmpl,
                                        std::string_view ruleset_text);

// Number of bundled examples per category.
int AvailableShots();

enum class ParseFailure { kBlank, kNoValidLabel, kAmbiguous };

const char* ParseFailureName(ParseFailure failure);
std::optional<ParseFailure> ParseParseFailure(std::string_view name);

struct LabelSet {
  // Distinct labels in order of appearance; empty on failure.
  std::vector<std::string> labels;
  std::optional<ParseFailure> failure;

  bool ok() const { return !failure.has_value(); }
  bool operator==(const LabelSet&) const = default;
};

// Reads labels from the last line that contains any label of the taxonomy,
// case-insensitively. A single-response parse with more than one label is
// ambiguous.
LabelSet ParseModelResponse(std::string_view text, Taxonomy taxonomy,
                            bool multi_allowed);

}  // namespace ritscan

#endif  // RITSCAN_PROMPTS_H_
