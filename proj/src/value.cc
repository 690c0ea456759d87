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

#include "ritscan/value.h"

#include <cctype>
#include <cstdlib>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace ritscan {
namespace {

constexpr int kMaxDigits = 18;

__int128 Pow10(int exponent) {
  __int128 result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Decimal::Decimal(int64_t mantissa, int scale)
    : mantissa_(mantissa), scale_(scale) {
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
  if (mantissa_ == 0) scale_ = 0;
}

std::optional<Decimal> Decimal::Parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  int64_t mantissa = 0;
  int scale = 0;
  int digits = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    if (mantissa != 0 || c != '0') ++digits;
    if (digits > kMaxDigits) return std::nullopt;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_dot) ++scale;
  }
  if (!seen_digit) return std::nullopt;
  return Decimal(negative ? -mantissa : mantissa, scale);
}

std::string Decimal::ToString() const {
  if (scale_ == 0) return absl::StrCat(mantissa_);
  std::string digits = absl::StrCat(mantissa_ < 0 ? -mantissa_ : mantissa_);
  if (static_cast<int>(digits.size()) <= scale_) {
    digits.insert(0, static_cast<size_t>(scale_) - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - static_cast<size_t>(scale_), ".");
  return mantissa_ < 0 ? "-" + digits : digits;
}

Decimal Decimal::Plus(int64_t delta) const {
  return Decimal(mantissa_ + delta * static_cast<int64_t>(Pow10(scale_)),
                 scale_);
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  int common = scale_ > other.scale_ ? scale_ : other.scale_;
  __int128 lhs = static_cast<__int128>(mantissa_) * Pow10(common - scale_);
  __int128 rhs =
      static_cast<__int128>(other.mantissa_) * Pow10(common - other.scale_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

const char* CompareOpText(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return "==";
    case CompareOp::kNe:
      return "!=";
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
  }
  return "?";
}

std::optional<CompareOp> ParseCompareOp(std::string_view text) {
  if (text == "==") return CompareOp::kEq;
  if (text == "!=") return CompareOp::kNe;
  if (text == "<") return CompareOp::kLt;
  if (text == "<=") return CompareOp::kLe;
  if (text == ">") return CompareOp::kGt;
  if (text == ">=") return CompareOp::kGe;
  return std::nullopt;
}

Value Value::FromLiteral(std::string_view text, bool quoted) {
  Value value;
  value.quoted_ = quoted;
  std::string upper = absl::AsciiStrToUpper(std::string(text));
  if (upper == "ON" || upper == "OFF") {
    value.kind_ = Kind::kSwitch;
    value.canonical_ = upper;
  } else if (upper == "OPEN" || upper == "CLOSED" || upper == "CLOSE") {
    value.kind_ = Kind::kOpenClosed;
    value.canonical_ = upper == "CLOSE" ? "CLOSED" : upper;
  } else if (upper == "UP" || upper == "DOWN") {
    value.kind_ = Kind::kUpDown;
    value.canonical_ = upper;
  } else if (auto number = quoted ? std::nullopt : Decimal::Parse(text)) {
    value.kind_ = Kind::kNumber;
    value.number_ = *number;
    value.canonical_ = number->ToString();
  } else {
    value.kind_ = Kind::kOpaque;
    value.canonical_ = std::string(text);
  }
  return value;
}

Value Value::Number(Decimal number) {
  Value value;
  value.kind_ = Kind::kNumber;
  value.number_ = number;
  value.canonical_ = number.ToString();
  return value;
}

Value Value::Opaque(std::string text, bool quoted) {
  Value value;
  value.kind_ = Kind::kOpaque;
  value.canonical_ = std::move(text);
  value.quoted_ = quoted;
  return value;
}

bool Value::Equivalent(const Value& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::kNumber) return *number_ == *other.number_;
  return canonical_ == other.canonical_;
}

std::string Value::ToSource() const {
  if (quoted_) return absl::StrCat("\"", canonical_, "\"");
  return canonical_;
}

const char* ValueKindName(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::kSwitch:
      return "switch";
    case Value::Kind::kOpenClosed:
      return "open-closed";
    case Value::Kind::kUpDown:
      return "up-down";
    case Value::Kind::kNumber:
      return "number";
    case Value::Kind::kOpaque:
      return "opaque";
  }
  return "opaque";
}

bool EvaluateComparison(const Value& lhs, CompareOp op, const Value& rhs) {
  switch (op) {
    case CompareOp::kEq:
      return lhs.Equivalent(rhs);
    case CompareOp::kNe:
      return !lhs.Equivalent(rhs);
    default:
      break;
  }
  if (lhs.kind() != Value::Kind::kNumber ||
      rhs.kind() != Value::Kind::kNumber) {
    return false;
  }
  const Decimal& a = *lhs.number();
  const Decimal& b = *rhs.number();
  switch (op) {
    case CompareOp::kLt:
      return a < b;
    case CompareOp::kLe:
      return a <= b;
    case CompareOp::kGt:
      return a > b;
    case CompareOp::kGe:
      return a >= b;
    default:
      return false;
  }
}

Value Antonym(const Value& value) {
  const std::string& c = value.canonical();
  switch (value.kind()) {
    case Value::Kind::kSwitch:
      return Value::FromLiteral(c == "ON" ? "OFF" : "ON", value.quoted());
    case Value::Kind::kOpenClosed:
      return Value::FromLiteral(c == "OPEN" ? "CLOSED" : "OPEN",
                                value.quoted());
    case Value::Kind::kUpDown:
      return Value::FromLiteral(c == "UP" ? "DOWN" : "UP", value.quoted());
    case Value::Kind::kNumber:
      return Value::Number(value.number()->Plus(1));
    case Value::Kind::kOpaque:
      break;
  }
  return Value::Opaque(c + "_alt", value.quoted());
}

std::string FormatTimeOfDay(int minute) {
  return absl::StrFormat("%d:%02d", minute / 60, minute % 60);
}

}  // namespace ritscan
