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

#include "ritscan/source.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace ritscan {

SourceFile::SourceFile(std::string path, std::string content)
    : path_(std::move(path)), content_(std::move(content)) {
  line_index_.push_back(0);
  for (size_t i = 0; i < content_.size(); ++i) {
    if (content_[i] == '\n' && i + 1 < content_.size()) {
      line_index_.push_back(i + 1);
    }
  }
}

absl::StatusOr<SourceFile> SourceFile::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    return absl::DataLossError(absl::StrCat("error reading ", path));
  }
  return SourceFile(path, buffer.str());
}

SourceLocation SourceFile::Locate(size_t offset) const {
  offset = std::min(offset, content_.size());
  auto it = std::upper_bound(line_index_.begin(), line_index_.end(), offset);
  size_t line = static_cast<size_t>(it - line_index_.begin());
  size_t line_start = line_index_[line - 1];
  return SourceLocation{static_cast<int>(line),
                        static_cast<int>(offset - line_start) + 1};
}

SourceSpan SourceFile::Span(size_t begin_offset, size_t end_offset) const {
  return SourceSpan{begin_offset, end_offset, Locate(begin_offset),
                    Locate(end_offset)};
}

std::string_view SourceFile::Text(const SourceSpan& span) const {
  std::string_view view(content_);
  if (span.begin_offset >= view.size()) return {};
  return view.substr(span.begin_offset, span.end_offset - span.begin_offset);
}

absl::StatusOr<std::vector<SourceFile>> LoadRuleFiles(
    const std::vector<std::string>& paths) {
  namespace fs = std::filesystem;
  std::vector<SourceFile> files;
  for (const std::string& path : paths) {
    std::vector<std::string> expanded;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(path, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".rules") {
          expanded.push_back(entry.path().string());
        }
      }
      if (ec) return absl::NotFoundError(absl::StrCat("cannot list ", path));
      std::sort(expanded.begin(), expanded.end());
    } else {
      expanded.push_back(path);
    }
    for (const std::string& file : expanded) {
      auto source = SourceFile::Load(file);
      if (!source.ok()) return source.status();
      files.push_back(*std::move(source));
    }
  }
  return files;
}

const char* SeverityName(Severity severity) {
  return severity == Severity::kError ? "error" : "warning";
}

std::string FormatDiagnostic(const std::string& path,
                             const Diagnostic& diagnostic) {
  return absl::StrCat(path, ":", diagnostic.location.begin.line, ":",
                      diagnostic.location.begin.column, ": ",
                      SeverityName(diagnostic.severity), ": ",
                      diagnostic.message);
}

}  // namespace ritscan
