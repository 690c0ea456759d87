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

#include "ritscan/prompts.h"

#include <algorithm>
#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "ritscan/prompt_assets.h"

namespace ritscan {
namespace {

constexpr int kBundledShots = 2;

std::vector<std::string> SplitExamples(const char* asset) {
  std::vector<std::string> out;
  for (absl::string_view part : absl::StrSplit(asset, "%%\n")) {
    std::string text(part);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    out.push_back(text);
  }
  return out;
}

const std::vector<std::string>& Examples(const std::string& label) {
  static const auto* table = new std::vector<std::pair<std::string, std::vector<std::string>>>{
      {"WAC", SplitExamples(assets::k_examples_wac)},
      {"SAC", SplitExamples(assets::k_examples_sac)},
      {"WTC", SplitExamples(assets::k_examples_wtc)},
      {"STC", SplitExamples(assets::k_examples_stc)},
      {"WCC", SplitExamples(assets::k_examples_wcc)},
      {"SCC", SplitExamples(assets::k_examples_scc)},
  };
  for (const auto& [name, examples] : *table) {
    if (name == label) return examples;
  }
  static const auto* empty = new std::vector<std::string>;
  return *empty;
}

// Examples shown for a coarse class: the first example of each fine class.
std::vector<std::string> CoarseExamples(const std::string& label) {
  std::vector<std::string> fine;
  if (label == "AC") fine = {"WAC", "SAC"};
  if (label == "TC") fine = {"WTC", "STC"};
  if (label == "CC") fine = {"SCC", "WCC"};
  std::vector<std::string> out;
  for (const std::string& f : fine) out.push_back(Examples(f).front());
  return out;
}

std::string ExampleBlock(const std::vector<std::string>& examples, int shots) {
  std::string out;
  for (int i = 0; i < shots && i < static_cast<int>(examples.size()); ++i) {
    absl::StrAppend(&out, i > 0 ? "\n" : "", "\nExample:\n", examples[i]);
  }
  return out;
}

const char* OutputFormat(const PromptTemplate& t) {
  if (t.taxonomy == Taxonomy::kSixClass) {
    return t.multi_response ? assets::k_output_six_multi : assets::k_output_six_single;
  }
  return t.multi_response ? assets::k_output_three_multi : assets::k_output_three_single;
}

}  // namespace

const char* TaxonomyName(Taxonomy taxonomy) {
  return taxonomy == Taxonomy::kSixClass ? "six-class" : "three-class";
}

std::optional<Taxonomy> ParseTaxonomy(std::string_view name) {
  if (name == "six-class") return Taxonomy::kSixClass;
  if (name == "three-class") return Taxonomy::kThreeClass;
  return std::nullopt;
}

const std::vector<std::string>& TaxonomyLabels(Taxonomy taxonomy) {
  static const auto* six =
      new std::vector<std::string>{"WAC", "SAC", "WTC", "STC", "WCC", "SCC"};
  static const auto* three = new std::vector<std::string>{"AC", "TC", "CC"};
  return taxonomy == Taxonomy::kSixClass ? *six : *three;
}

absl::Status PromptTemplate::Validate() const {
  if (shots < 0 || shots > kBundledShots) {
    return absl::InvalidArgumentError(
        absl::StrCat("shots must be between 0 and ", kBundledShots, ", got ", shots));
  }
  return absl::OkStatus();
}

int AvailableShots() { return kBundledShots; }

absl::StatusOr<std::string> BuildPrompt(const PromptTemplate& tmpl,
                                        std::string_view ruleset_text) {
  if (auto status = tmpl.Validate(); !status.ok()) return status;
  if (std::all_of(ruleset_text.begin(), ruleset_text.end(),
                  [](char c) { return absl::ascii_isspace(static_cast<unsigned char>(c)); })) {
    return absl::InvalidArgumentError("ruleset text is empty");
  }
  std::string definitions;
  if (tmpl.taxonomy == Taxonomy::kSixClass) {
    definitions = assets::k_definitions_six;
    for (const std::string& label : TaxonomyLabels(Taxonomy::kSixClass)) {
      absl::StrReplaceAll({{absl::StrCat("{{EXAMPLES:", label, "}}"),
                            ExampleBlock(Examples(label), tmpl.shots)}},
                          &definitions);
    }
  } else {
    definitions = assets::k_definitions_three;
    for (const std::string& label : TaxonomyLabels(Taxonomy::kThreeClass)) {
      absl::StrReplaceAll({{absl::StrCat("{{EXAMPLES:", label, "}}"),
                            ExampleBlock(CoarseExamples(label), tmpl.shots)}},
                          &definitions);
    }
  }
  return absl::StrCat(assets::k_preamble, definitions, OutputFormat(tmpl),
                      assets::k_rules_header,
                      absl::string_view(ruleset_text.data(), ruleset_text.size()));
}

const char* ParseFailureName(ParseFailure failure) {
  switch (failure) {
    case ParseFailure::kBlank:
      return "blank";
    case ParseFailure::kNoValidLabel:
      return "no-valid-label";
    case ParseFailure::kAmbiguous:
      return "ambiguous";
  }
  return "blank";
}

std::optional<ParseFailure> ParseParseFailure(std::string_view name) {
  for (ParseFailure f :
       {ParseFailure::kBlank, ParseFailure::kNoValidLabel, ParseFailure::kAmbiguous}) {
    if (name == ParseFailureName(f)) return f;
  }
  return std::nullopt;
}

LabelSet ParseModelResponse(std::string_view text, Taxonomy taxonomy,
                            bool multi_allowed) {
  LabelSet result;
  absl::string_view all(text.data(), text.size());
  if (absl::StripAsciiWhitespace(all).empty()) {
    result.failure = ParseFailure::kBlank;
    return result;
  }
  const std::vector<std::string>& valid = TaxonomyLabels(taxonomy);
  std::vector<absl::string_view> lines = absl::StrSplit(all, '\n');
  for (auto line = lines.rbegin(); line != lines.rend(); ++line) {
    std::vector<std::string> found;
    for (absl::string_view word :
         absl::StrSplit(*line, absl::ByAnyChar(" \t\r,;:.!?()[]{}\"'`*/|-+=<>"),
                        absl::SkipEmpty())) {
      std::string upper = absl::AsciiStrToUpper(std::string(word));
      if (std::find(valid.begin(), valid.end(), upper) != valid.end() &&
          std::find(found.begin(), found.end(), upper) == found.end()) {
        found.push_back(upper);
      }
    }
    if (found.empty()) continue;
    if (!multi_allowed && found.size() > 1) {
      result.failure = ParseFailure::kAmbiguous;
      return result;
    }
    result.labels = std::move(found);
    return result;
  }
  result.failure = ParseFailure::kNoValidLabel;
  return result;
}

}  // namespace ritscan
