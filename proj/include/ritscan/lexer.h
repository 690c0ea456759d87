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

#ifndef RITSCAN_LEXER_H_
#define RITSCAN_LEXER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ritscan/source.h"

namespace ritscan {

enum class TokenKind {
  kKwRule,
  kKwWhen,
  kKwThen,
  kKwEnd,
  kKwIf,
  kKwElse,
  kIdent,
  kString,
  kNumber,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kLBracket,
  kRBracket,
  kComma,
  kDot,
  kColon,
  kSemicolon,
  // Operators and any other punctuation; `text` holds the lexeme.
  kOperator,
  // Unterminated string/comment or a byte that starts no token.
  kError,
};

const char* TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kError;
  // Lexeme for most kinds; unescaped contents for strings; message for errors.
  std::string text;
  size_t offset = 0;
  size_t length = 0;
  SourceLocation location;
  // Column with tabs expanded to multiples of four. Used for indentation
  // scoped `if` bodies.
  int visual_column = 0;
  // True when no other token precedes this one on its line.
  bool starts_line = false;

  size_t end_offset() const { return offset + length; }
};

// Splits `source` into tokens. Whitespace and `//`, `/* */` comments are
// skipped; every other byte belongs to exactly one token.
std::vector<Token> Tokenize(const SourceFile& source);

}  // namespace ritscan

#endif  // RITSCAN_LEXER_H_
