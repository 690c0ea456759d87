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

#ifndef RITSCAN_SOURCE_H_
#define RITSCAN_SOURCE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace ritscan {

// 1-based line and column. Columns count bytes.
struct SourceLocation {
  int line = 1;
  int column = 1;

  bool operator==(const SourceLocation&) const = default;
};

// Half-open byte range [begin_offset, end_offset) with resolved endpoints.
struct SourceSpan {
  size_t begin_offset = 0;
  size_t end_offset = 0;
  SourceLocation begin;
  SourceLocation end;

  bool operator==(const SourceSpan&) const = default;
};

// An immutable rules file held in memory together with its line index.
class SourceFile {
 public:
  SourceFile(std::string path, std::string content);

  static absl::StatusOr<SourceFile> Load(const std::string& path);

  const std::string& path() const { return path_; }
  const std::string& content() const { return content_; }

  // Offsets of the first byte of every line. Always starts with 0.
  const std::vector<size_t>& line_index() const { return line_index_; }

  SourceLocation Locate(size_t offset) const;
  SourceSpan Span(size_t begin_offset, size_t end_offset) const;
  std::string_view Text(const SourceSpan& span) const;

 private:
  std::string path_;
  std::string content_;
  std::vector<size_t> line_index_;
};

// Loads every path; directories contribute the `*.rules` files below them,
// recursively, in path order.
absl::StatusOr<std::vector<SourceFile>> LoadRuleFiles(
    const std::vector<std::string>& paths);

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string message;
  SourceSpan location;

  bool operator==(const Diagnostic&) const = default;
};

const char* SeverityName(Severity severity);

// "path:line:col: error: message"
std::string FormatDiagnostic(const std::string& path,
                             const Diagnostic& diagnostic);

}  // namespace ritscan

#endif  // RITSCAN_SOURCE_H_
