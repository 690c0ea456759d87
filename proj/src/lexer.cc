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

#include "ritscan/lexer.h"

#include <array>
#include <cctype>
#include <utility>

#include "absl/strings/ascii.h"

namespace ritscan {
namespace {

constexpr int kTabWidth = 4;

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

TokenKind KeywordOrIdent(std::string_view word) {
  std::string lower = absl::AsciiStrToLower(std::string(word));
  if (lower == "rule") return TokenKind::kKwRule;
  if (lower == "when") return TokenKind::kKwWhen;
  if (lower == "then") return TokenKind::kKwThen;
  if (lower == "end") return TokenKind::kKwEnd;
  if (lower == "if") return TokenKind::kKwIf;
  if (lower == "else") return TokenKind::kKwElse;
  return TokenKind::kIdent;
}

class Lexer {
 public:
  explicit Lexer(const SourceFile& source)
      : source_(source), text_(source.content()) {}

  std::vector<Token> Run() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        line_has_token_ = false;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
        continue;
      }
      if (c == '/' && Peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '/' && Peek(1) == '*') {
        size_t close = text_.find("*/", pos_ + 2);
        if (close == std::string::npos) {
          Emit(TokenKind::kError, pos_, text_.size() - pos_,
               "unterminated block comment");
          pos_ = text_.size();
        } else {
          pos_ = close + 2;
        }
        continue;
      }
      if (c == '"' || c == '\'') {
        LexString(c);
        continue;
      }
      if (IsDigit(c)) {
        size_t start = pos_;
        while (pos_ < text_.size() && IsDigit(text_[pos_])) ++pos_;
        if (Peek(0) == '.' && IsDigit(Peek(1))) {
          ++pos_;
          while (pos_ < text_.size() && IsDigit(text_[pos_])) ++pos_;
        }
        Emit(TokenKind::kNumber, start, pos_ - start);
        continue;
      }
      if (IsIdentStart(c)) {
        size_t start = pos_;
        while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
        std::string_view word(text_.data() + start, pos_ - start);
        Emit(KeywordOrIdent(word), start, pos_ - start);
        continue;
      }
      LexPunctuation();
    }
    return std::move(tokens_);
  }

 private:
  char Peek(size_t ahead) const {
    size_t at = pos_ + ahead;
    return at < text_.size() ? text_[at] : '\0';
  }

  void LexString(char quote) {
    size_t start = pos_;
    std::string value;
    ++pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == quote) {
        ++pos_;
        Emit(TokenKind::kString, start, pos_ - start, std::move(value));
        return;
      }
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '\n') {
        char next = text_[pos_ + 1];
        switch (next) {
          case 'n':
            value.push_back('\n');
            break;
          case 't':
            value.push_back('\t');
            break;
          default:
            value.push_back(next);
        }
        pos_ += 2;
        continue;
      }
      value.push_back(c);
      ++pos_;
    }
    // Error token covers the rest of the line so one bad literal only
    // poisons one line.
    Emit(TokenKind::kError, start, pos_ - start, "unterminated string literal");
  }

  void LexPunctuation() {
    static constexpr std::array<std::string_view, 10> kTwoChar = {
        "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "->", "=>"};
    std::string_view rest(text_.data() + pos_, text_.size() - pos_);
    for (std::string_view op : kTwoChar) {
      if (rest.substr(0, 2) == op) {
        Emit(TokenKind::kOperator, pos_, 2);
        pos_ += 2;
        return;
      }
    }
    char c = text_[pos_];
    TokenKind kind = TokenKind::kOperator;
    switch (c) {
      case '(':
        kind = TokenKind::kLParen;
        break;
      case ')':
        kind = TokenKind::kRParen;
        break;
      case '{':
        kind = TokenKind::kLBrace;
        break;
      case '}':
        kind = TokenKind::kRBrace;
        break;
      case '[':
        kind = TokenKind::kLBracket;
        break;
      case ']':
        kind = TokenKind::kRBracket;
        break;
      case ',':
        kind = TokenKind::kComma;
        break;
      case '.':
        kind = TokenKind::kDot;
        break;
      case ':':
        kind = TokenKind::kColon;
        break;
      case ';':
        kind = TokenKind::kSemicolon;
        break;
      default:
        if (std::string_view("<>=!+-*/%|&?@#$^~\\").find(c) ==
            std::string_view::npos) {
          // Non-ASCII bytes of a UTF-8 sequence are kept together.
          size_t len = 1;
          while (pos_ + len < text_.size() &&
                 (static_cast<unsigned char>(text_[pos_ + len]) & 0xC0) ==
                     0x80) {
            ++len;
          }
          Emit(TokenKind::kError, pos_, len, "unexpected character");
          pos_ += len;
          return;
        }
    }
    Emit(kind, pos_, 1);
    ++pos_;
  }

  void Emit(TokenKind kind, size_t offset, size_t length,
            std::string text = {}) {
    Token token;
    token.kind = kind;
    token.offset = offset;
    token.length = length;
    token.location = source_.Locate(offset);
    if (text.empty() && kind != TokenKind::kString) {
      token.text = text_.substr(offset, length);
    } else {
      token.text = std::move(text);
    }
    size_t line_start =
        source_.line_index()[static_cast<size_t>(token.location.line - 1)];
    int visual = 0;
    for (size_t i = line_start; i < offset; ++i) {
      visual = text_[i] == '\t' ? (visual / kTabWidth + 1) * kTabWidth
                                : visual + 1;
    }
    token.visual_column = visual;
    token.starts_line = !line_has_token_;
    line_has_token_ = true;
    tokens_.push_back(std::move(token));
  }

  const SourceFile& source_;
  const std::string& text_;
  size_t pos_ = 0;
  bool line_has_token_ = false;
  std::vector<Token> tokens_;
};

}  // namespace

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kKwRule:
      return "kw-rule";
    case TokenKind::kKwWhen:
      return "kw-when";
    case TokenKind::kKwThen:
      return "kw-then";
    case TokenKind::kKwEnd:
      return "kw-end";
    case TokenKind::kKwIf:
      return "kw-if";
    case TokenKind::kKwElse:
      return "kw-else";
    case TokenKind::kIdent:
      return "ident";
    case TokenKind::kString:
      return "string";
    case TokenKind::kNumber:
      return "number";
    case TokenKind::kLParen:
      return "lparen";
    case TokenKind::kRParen:
      return "rparen";
    case TokenKind::kLBrace:
      return "lbrace";
    case TokenKind::kRBrace:
      return "rbrace";
    case TokenKind::kLBracket:
      return "lbracket";
    case TokenKind::kRBracket:
      return "rbracket";
    case TokenKind::kComma:
      return "comma";
    case TokenKind::kDot:
      return "dot";
    case TokenKind::kColon:
      return "colon";
    case TokenKind::kSemicolon:
      return "semicolon";
    case TokenKind::kOperator:
      return "operator";
    case TokenKind::kError:
      return "error";
  }
  return "unknown";
}

std::vector<Token> Tokenize(const SourceFile& source) {
  return Lexer(source).Run();
}

}  // namespace ritscan
