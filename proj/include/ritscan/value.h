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

#ifndef RITSCAN_VALUE_H_
#define RITSCAN_VALUE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ritscan {

// Exact decimal number: mantissa / 10^scale, normalized so that the mantissa
// carries no trailing zero digits when scale > 0.
class Decimal {
 public:
  Decimal() = default;
  Decimal(int64_t mantissa, int scale);

  static Decimal FromInt(int64_t value) { return Decimal(value, 0); }
  // Accepts an optional sign, digits and an optional fraction. Returns nullopt
  // on malformed text or when more than 18 significant digits are present.
  static std::optional<Decimal> Parse(std::string_view text);

  int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }

  std::string ToString() const;
  Decimal Plus(int64_t delta) const;

  bool operator==(const Decimal&) const = default;
  std::strong_ordering operator<=>(const Decimal& other) const;

 private:
  int64_t mantissa_ = 0;
  int scale_ = 0;
};

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

const char* CompareOpText(CompareOp op);
std::optional<CompareOp> ParseCompareOp(std::string_view text);

// An item state or command value. Well-known switch-like literals are
// case-folded into canonical spellings; anything unrecognized stays an opaque
// atom compared verbatim.
class Value {
 public:
  enum class Kind { kSwitch, kOpenClosed, kUpDown, kNumber, kOpaque };

  Value() = default;

  static Value FromLiteral(std::string_view text, bool quoted);
  static Value Number(Decimal number);
  static Value Opaque(std::string text, bool quoted = false);

  Kind kind() const { return kind_; }
  const std::string& canonical() const { return canonical_; }
  bool quoted() const { return quoted_; }
  const std::optional<Decimal>& number() const { return number_; }

  // Same canonical value, ignoring how it was spelled in the source.
  bool Equivalent(const Value& other) const;

  // Spelling used when writing the value back into rule source.
  std::string ToSource() const;

  bool operator==(const Value&) const = default;

 private:
  Kind kind_ = Kind::kOpaque;
  std::string canonical_;
  bool quoted_ = false;
  std::optional<Decimal> number_;
};

const char* ValueKindName(Value::Kind kind);

// `lhs <op> rhs`. Ordering operators are only true between two numbers.
bool EvaluateComparison(const Value& lhs, CompareOp op, const Value& rhs);

// A value different from `value` of the same family: ON<->OFF,
// OPEN<->CLOSED, UP<->DOWN, n -> n+1, and a suffixed atom for opaque text.
Value Antonym(const Value& value);

// Minutes since midnight, inclusive on both ends.
struct TimeWindow {
  int start_minute = 0;
  int end_minute = 24 * 60 - 1;

  bool operator==(const TimeWindow&) const = default;
};

std::string FormatTimeOfDay(int minute);

}  // namespace ritscan

#endif  // RITSCAN_VALUE_H_
