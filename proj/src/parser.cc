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

#include "ritscan/parser.h"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "ritscan/lexer.h"

namespace ritscan {
namespace {

constexpr size_t kNpos = static_cast<size_t>(-1);

bool IsWord(const Token& token, std::string_view word) {
  return token.kind == TokenKind::kIdent &&
         absl::EqualsIgnoreCase(token.text, absl::string_view(word.data(), word.size()));
}

bool IsOperator(const Token& token, std::string_view op) {
  return token.kind == TokenKind::kOperator && token.text == op;
}

bool IsOpener(TokenKind kind) {
  return kind == TokenKind::kLParen || kind == TokenKind::kLBrace ||
         kind == TokenKind::kLBracket;
}

bool IsCloser(TokenKind kind) {
  return kind == TokenKind::kRParen || kind == TokenKind::kRBrace ||
         kind == TokenKind::kRBracket;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// A single comparison inside a condition expression.
struct Atom {
  bool is_time = false;
  std::string item;
  CompareOp op = CompareOp::kEq;
  Value value;
  int minute = 0;
  size_t begin = 0;  // token range [begin, end)
  size_t end = 0;
};

struct ParseFailure {
  std::string message;
  size_t token = 0;
};

class RuleParser {
 public:
  RuleParser(const SourceFile& source, const std::vector<Token>& tokens,
             std::string rule_id)
      : source_(source), tokens_(tokens), rule_id_(std::move(rule_id)) {}

  // Parses triggers in [begin, end) into `rule`.
  std::optional<ParseFailure> ParseTriggers(size_t begin, size_t end,
                                            Rule* rule) {
    if (begin >= end) return ParseFailure{"empty trigger clause", begin};
    for (size_t i = begin; i < end; ++i) {
      if (tokens_[i].kind == TokenKind::kError) {
        return ParseFailure{tokens_[i].text, i};
      }
    }
    std::vector<std::pair<size_t, size_t>> alternatives =
        SplitTopLevel(begin, end, [](const Token& t) { return IsWord(t, "or"); });
    for (auto [alt_begin, alt_end] : alternatives) {
      if (alt_begin >= alt_end) {
        return ParseFailure{"empty trigger alternative around 'or'", alt_begin};
      }
      auto pieces = SplitTopLevel(
          alt_begin, alt_end, [](const Token& t) { return IsOperator(t, "&&"); });
      auto trigger = ParseTrigger(pieces[0].first, pieces[0].second);
      if (std::holds_alternative<ParseFailure>(trigger)) {
        return std::get<ParseFailure>(trigger);
      }
      Trigger parsed = std::get<Trigger>(std::move(trigger));
      parsed.id = absl::StrCat(rule_id_, "t", ++trigger_count_);
      rule->triggers.push_back(std::move(parsed));
      if (pieces.size() > 1) {
        std::vector<Atom> atoms;
        for (size_t p = 1; p < pieces.size(); ++p) {
          if (auto failure = ParseConjunction(pieces[p].first,
                                              pieces[p].second, &atoms)) {
            return failure;
          }
        }
        auto conditions = AtomsToConditions(atoms, /*live=*/true);
        if (std::holds_alternative<ParseFailure>(conditions)) {
          return std::get<ParseFailure>(conditions);
        }
        for (Condition& c : std::get<std::vector<Condition>>(conditions)) {
          rule->conditions.push_back(std::move(c));
        }
      }
    }
    return std::nullopt;
  }

  void ParseScript(size_t begin, size_t end, Rule* rule,
                   std::vector<Diagnostic>* diagnostics) {
    rule_ = rule;
    diagnostics_ = diagnostics;
    ParseBlock(begin, end, rule->conditions, /*live=*/true);
  }

  SourceSpan SpanOf(size_t begin, size_t end) const {
    if (begin >= end) {
      size_t at = begin < tokens_.size() ? tokens_[begin].offset
                                         : source_.content().size();
      return source_.Span(at, at);
    }
    return source_.Span(tokens_[begin].offset, tokens_[end - 1].end_offset());
  }

  std::string TextOf(size_t begin, size_t end) const {
    return CollapseWhitespace(source_.Text(SpanOf(begin, end)));
  }

 private:
  template <typename Pred>
  std::vector<std::pair<size_t, size_t>> SplitTopLevel(size_t begin,
                                                       size_t end,
                                                       Pred is_separator) const {
    std::vector<std::pair<size_t, size_t>> parts;
    int depth = 0;
    size_t start = begin;
    for (size_t i = begin; i < end; ++i) {
      const Token& t = tokens_[i];
      if (IsOpener(t.kind)) ++depth;
      if (IsCloser(t.kind)) --depth;
      if (depth == 0 && is_separator(t)) {
        parts.emplace_back(start, i);
        start = i + 1;
      }
    }
    parts.emplace_back(start, end);
    return parts;
  }

  size_t Matching(size_t open, size_t end) const {
    int depth = 0;
    for (size_t i = open; i < end; ++i) {
      if (IsOpener(tokens_[i].kind)) ++depth;
      if (IsCloser(tokens_[i].kind)) {
        --depth;
        if (depth == 0) return i;
      }
    }
    return kNpos;
  }

  // Parses a literal value at `*i` (advancing it).
  std::optional<Value> ParseValue(size_t* i, size_t end) const {
    if (*i >= end) return std::nullopt;
    const Token& t = tokens_[*i];
    if (t.kind == TokenKind::kString) {
      ++*i;
      return Value::FromLiteral(t.text, /*quoted=*/true);
    }
    if (t.kind == TokenKind::kNumber) {
      ++*i;
      return Value::FromLiteral(t.text, /*quoted=*/false);
    }
    if (IsOperator(t, "-") && *i + 1 < end &&
        tokens_[*i + 1].kind == TokenKind::kNumber &&
        tokens_[*i + 1].offset == t.end_offset()) {
      std::string text = absl::StrCat("-", tokens_[*i + 1].text);
      *i += 2;
      return Value::FromLiteral(text, /*quoted=*/false);
    }
    if (t.kind == TokenKind::kIdent) {
      if (*i + 1 < end && tokens_[*i + 1].kind == TokenKind::kDot) {
        return std::nullopt;
      }
      ++*i;
      return Value::FromLiteral(t.text, /*quoted=*/false);
    }
    return std::nullopt;
  }

  // HH:MM written as number, colon, number without spaces.
  std::optional<int> ParseTimeLiteral(size_t* i, size_t end) const {
    if (*i + 2 >= end) return std::nullopt;
    const Token& hours = tokens_[*i];
    const Token& colon = tokens_[*i + 1];
    const Token& minutes = tokens_[*i + 2];
    if (hours.kind != TokenKind::kNumber || colon.kind != TokenKind::kColon ||
        minutes.kind != TokenKind::kNumber ||
        colon.offset != hours.end_offset() ||
        minutes.offset != colon.end_offset() || minutes.text.size() != 2 ||
        hours.text.find('.') != std::string::npos) {
      return std::nullopt;
    }
    int h = std::stoi(hours.text);
    int m = std::stoi(minutes.text);
    if (h > 23 || m > 59) return std::nullopt;
    *i += 3;
    return h * 60 + m;
  }

  std::variant<Trigger, ParseFailure> ParseTrigger(size_t begin,
                                                   size_t end) const {
    Trigger trigger;
    trigger.span = SpanOf(begin, end);
    trigger.text = TextOf(begin, end);
    size_t i = begin;
    auto at_end = [&] { return i == end; };
    auto fail = [&](std::string message) {
      return ParseFailure{
          absl::StrCat(message, ": '", trigger.text, "'"),
          std::min(i, end > begin ? end - 1 : begin)};
    };

    if (i + 2 < end && IsWord(tokens_[i], "Time") &&
        IsWord(tokens_[i + 1], "cron") &&
        tokens_[i + 2].kind == TokenKind::kString) {
      trigger.kind = TriggerKind::kCron;
      trigger.cron = CollapseWhitespace(tokens_[i + 2].text);
      i += 3;
      if (!at_end()) return fail("unexpected tokens after cron trigger");
      return trigger;
    }
    if (i + 1 < end && IsWord(tokens_[i], "System") &&
        IsWord(tokens_[i + 1], "started")) {
      trigger.kind = TriggerKind::kSystemStarted;
      i += 2;
      if (!at_end()) return fail("unexpected tokens after 'System started'");
      return trigger;
    }

    bool item_keyword = IsWord(tokens_[i], "Item");
    if (item_keyword) ++i;
    if (i >= end || tokens_[i].kind != TokenKind::kIdent) {
      return fail("unrecognized trigger");
    }
    trigger.item = tokens_[i].text;
    ++i;

    if (i < end && (IsWord(tokens_[i], "changed") ||
                    IsWord(tokens_[i], "changes"))) {
      trigger.kind = TriggerKind::kItemChanged;
      ++i;
      if (i < end && IsWord(tokens_[i], "from")) {
        ++i;
        trigger.from_value = ParseValue(&i, end);
        if (!trigger.from_value) return fail("expected value after 'from'");
      }
      if (i < end && IsWord(tokens_[i], "to")) {
        ++i;
        trigger.to_value = ParseValue(&i, end);
        if (!trigger.to_value) return fail("expected value after 'to'");
      }
      if (!at_end()) return fail("unexpected tokens in 'changed' trigger");
      return trigger;
    }
    if (i < end && IsWord(tokens_[i], "received")) {
      ++i;
      if (i < end && IsWord(tokens_[i], "command")) {
        trigger.kind = TriggerKind::kItemCommand;
        ++i;
        if (!at_end()) {
          trigger.command_value = ParseValue(&i, end);
          if (!trigger.command_value || !at_end()) {
            return fail("unexpected tokens in 'received command' trigger");
          }
        }
        return trigger;
      }
      if (i < end && IsWord(tokens_[i], "update")) {
        trigger.kind = TriggerKind::kItemUpdate;
        ++i;
        if (!at_end()) return fail("unsupported 'received update' value");
        return trigger;
      }
      return fail("expected 'command' or 'update' after 'received'");
    }
    if (!item_keyword) {
      // X.state <op> V
      if (i + 1 < end && tokens_[i].kind == TokenKind::kDot &&
          IsWord(tokens_[i + 1], "state")) {
        i += 2;
      }
      if (i < end && tokens_[i].kind == TokenKind::kOperator) {
        if (auto op = ParseCompareOp(tokens_[i].text)) {
          ++i;
          auto value = ParseValue(&i, end);
          if (value && at_end()) {
            trigger.kind = TriggerKind::kStateComparison;
            trigger.comparison = Comparison{*op, *value};
            return trigger;
          }
        }
      }
    }
    return fail("unrecognized trigger");
  }

  std::optional<ParseFailure> ParseAtom(size_t begin, size_t end,
                                        std::vector<Atom>* atoms) const {
    Atom atom;
    atom.begin = begin;
    atom.end = end;
    size_t i = begin;
    if (i >= end || tokens_[i].kind != TokenKind::kIdent) {
      return ParseFailure{
          absl::StrCat("unsupported condition '", TextOf(begin, end), "'"),
          begin};
    }
    atom.item = tokens_[i].text;
    bool is_time_name = absl::EqualsIgnoreCase(atom.item, "time");
    ++i;
    if (i + 1 < end && tokens_[i].kind == TokenKind::kDot &&
        IsWord(tokens_[i + 1], "state")) {
      i += 2;
      is_time_name = false;
    }
    std::optional<CompareOp> op;
    if (i < end && tokens_[i].kind == TokenKind::kOperator) {
      op = ParseCompareOp(tokens_[i].text);
    }
    if (!op) {
      return ParseFailure{
          absl::StrCat("unsupported condition '", TextOf(begin, end), "'"),
          begin};
    }
    atom.op = *op;
    ++i;
    size_t value_at = i;
    if (auto minute = ParseTimeLiteral(&i, end)) {
      if (!is_time_name || atom.op == CompareOp::kNe) {
        return ParseFailure{
            absl::StrCat("unsupported time comparison '", TextOf(begin, end),
                         "'"),
            value_at};
      }
      atom.is_time = true;
      atom.minute = *minute;
    } else {
      auto value = ParseValue(&i, end);
      if (!value) {
        return ParseFailure{
            absl::StrCat("unsupported condition '", TextOf(begin, end), "'"),
            value_at};
      }
      atom.value = *value;
    }
    if (i != end) {
      return ParseFailure{
          absl::StrCat("unsupported condition '", TextOf(begin, end), "'"),
          i};
    }
    atoms->push_back(std::move(atom));
    return std::nullopt;
  }

  // comparison ('&&' comparison)*, with optional parentheses.
  std::optional<ParseFailure> ParseConjunction(size_t begin, size_t end,
                                               std::vector<Atom>* atoms) const {
    while (begin < end && tokens_[begin].kind == TokenKind::kLParen &&
           Matching(begin, end) == end - 1) {
      ++begin;
      --end;
    }
    if (begin >= end) return ParseFailure{"empty condition", begin};
    for (size_t i = begin; i < end; ++i) {
      if (IsOperator(tokens_[i], "||") || IsOperator(tokens_[i], "!")) {
        return ParseFailure{
            absl::StrCat("unsupported operator '", tokens_[i].text,
                         "' in condition"),
            i};
      }
      if (tokens_[i].kind == TokenKind::kError) {
        return ParseFailure{tokens_[i].text, i};
      }
    }
    auto parts = SplitTopLevel(
        begin, end, [](const Token& t) { return IsOperator(t, "&&"); });
    if (parts.size() == 1) return ParseAtom(begin, end, atoms);
    for (auto [b, e] : parts) {
      if (auto failure = ParseConjunction(b, e, atoms)) return failure;
    }
    return std::nullopt;
  }

  // Item comparisons become one condition each; all time comparisons of one
  // expression merge into a single window.
  std::variant<std::vector<Condition>, ParseFailure> AtomsToConditions(
      const std::vector<Atom>& atoms, bool live) {
    std::vector<Condition> out;
    std::optional<TimeWindow> window;
    std::vector<std::string> window_texts;
    size_t window_begin = 0;
    size_t window_end = 0;
    for (const Atom& atom : atoms) {
      if (!atom.is_time) {
        Condition c;
        c.kind = ConditionKind::kItemComparison;
        c.item = atom.item;
        c.op = atom.op;
        c.value = atom.value;
        c.text = TextOf(atom.begin, atom.end);
        c.span = SpanOf(atom.begin, atom.end);
        out.push_back(std::move(c));
        continue;
      }
      if (!window) {
        window = TimeWindow{};
        window_begin = atom.begin;
      }
      window_end = atom.end;
      window_texts.push_back(TextOf(atom.begin, atom.end));
      int lo = window->start_minute;
      int hi = window->end_minute;
      switch (atom.op) {
        case CompareOp::kGe:
          lo = std::max(lo, atom.minute);
          break;
        case CompareOp::kGt:
          lo = std::max(lo, atom.minute + 1);
          break;
        case CompareOp::kLe:
          hi = std::min(hi, atom.minute);
          break;
        case CompareOp::kLt:
          hi = std::min(hi, atom.minute - 1);
          break;
        case CompareOp::kEq:
          lo = std::max(lo, atom.minute);
          hi = std::min(hi, atom.minute);
          break;
        case CompareOp::kNe:
          break;
      }
      window->start_minute = lo;
      window->end_minute = hi;
    }
    if (window) {
      if (window->start_minute > window->end_minute) {
        return ParseFailure{
            absl::StrCat("empty time window '",
                         absl::StrJoin(window_texts, " && "), "'"),
            window_begin};
      }
      Condition c;
      c.kind = ConditionKind::kTimeWindow;
      c.item = "time";
      c.window = window;
      c.text = absl::StrJoin(window_texts, " && ");
      c.span = SpanOf(window_begin, window_end);
      out.push_back(std::move(c));
    }
    // Ids follow source order.
    std::stable_sort(out.begin(), out.end(),
                     [](const Condition& a, const Condition& b) {
                       return a.span.begin_offset < b.span.begin_offset;
                     });
    if (live) {
      for (Condition& c : out) {
        c.id = absl::StrCat(rule_id_, "c", ++condition_count_);
      }
    }
    return out;
  }

  void Warn(size_t token, std::string message) {
    if (diagnostics_ == nullptr) return;
    size_t at = std::min(token, tokens_.size() - 1);
    diagnostics_->push_back(Diagnostic{
        Severity::kWarning, std::move(message),
        source_.Span(tokens_[at].offset, tokens_[at].end_offset())});
  }

  void ParseBlock(size_t begin, size_t end,
                  const std::vector<Condition>& guards, bool live) {
    size_t i = begin;
    while (i < end) {
      size_t next = ParseStatement(i, end, guards, live);
      i = std::max(next, i + 1);
    }
  }

  size_t SkipStatement(size_t i, size_t end) const {
    int depth = 0;
    size_t j = i;
    while (j < end) {
      TokenKind kind = tokens_[j].kind;
      if (IsOpener(kind)) {
        ++depth;
      } else if (IsCloser(kind)) {
        if (depth == 0) return j == i ? j + 1 : j;
        --depth;
      }
      ++j;
      if (depth == 0) {
        if (kind == TokenKind::kSemicolon) return j;
        if (j < end && tokens_[j].starts_line) return j;
      }
    }
    return end;
  }

  int LineIndent(size_t i) const {
    while (i > 0 && !tokens_[i].starts_line) --i;
    return tokens_[i].visual_column;
  }

  // End of an indentation-scoped body starting at `body`, relative to a
  // header line indented `indent` columns.
  size_t IndentScopeEnd(size_t body, size_t end, int indent) const {
    size_t k = body;
    while (k < end &&
           !(tokens_[k].starts_line && tokens_[k].visual_column <= indent)) {
      ++k;
    }
    return k;
  }

  // Parses the body following an `if (...)` or `else`; returns the index
  // after it.
  size_t ParseBody(size_t header, size_t body, size_t end,
                   const std::vector<Condition>& guards, bool live) {
    if (body >= end) {
      if (live) Warn(header, "missing statement body");
      return end;
    }
    const Token& first = tokens_[body];
    if (first.kind == TokenKind::kLBrace) {
      size_t close = Matching(body, end);
      if (close == kNpos) {
        if (live) Warn(body, "unbalanced '{'");
        return end;
      }
      ParseBlock(body + 1, close, guards, live);
      return close + 1;
    }
    if (!first.starts_line) {
      return ParseStatement(body, end, guards, live);
    }
    int indent = LineIndent(header);
    if (first.visual_column <= indent) {
      if (live) Warn(header, "missing statement body");
      return body;
    }
    size_t scope_end = IndentScopeEnd(body, end, indent);
    ParseBlock(body, scope_end, guards, live);
    return scope_end;
  }

  size_t ParseIf(size_t i, size_t end, const std::vector<Condition>& guards,
                 bool live) {
    if (i + 1 >= end || tokens_[i + 1].kind != TokenKind::kLParen) {
      if (live) Warn(i, "expected '(' after 'if'; statement skipped");
      return SkipStatement(i, end);
    }
    size_t close = Matching(i + 1, end);
    if (close == kNpos) {
      if (live) Warn(i + 1, "unbalanced '(' in if; statement skipped");
      return end;
    }
    std::vector<Atom> atoms;
    std::optional<ParseFailure> failure = ParseConjunction(i + 2, close, &atoms);
    std::vector<Condition> body_guards = guards;
    if (!failure) {
      auto conditions = AtomsToConditions(atoms, live);
      if (std::holds_alternative<ParseFailure>(conditions)) {
        failure = std::get<ParseFailure>(conditions);
      } else {
        for (Condition& c : std::get<std::vector<Condition>>(conditions)) {
          body_guards.push_back(std::move(c));
        }
      }
    }
    if (failure && live) {
      Warn(failure->token,
           absl::StrCat(failure->message, "; if statement skipped"));
    }
    bool body_live = live && !failure;
    size_t next = ParseBody(i, close + 1, end, body_guards, body_live);
    if (next < end && tokens_[next].kind == TokenKind::kKwElse) {
      if (live) Warn(next, "else branch not supported; skipped");
      size_t else_body = next + 1;
      if (else_body < end && tokens_[else_body].kind == TokenKind::kKwIf) {
        return ParseIf(else_body, end, guards, /*live=*/false);
      }
      return ParseBody(next, else_body, end, guards, /*live=*/false);
    }
    return next;
  }

  // sendCommand(X, V) | postUpdate(X, V) | X.sendCommand(V) | X.postUpdate(V)
  std::optional<size_t> TryParseAction(size_t i, size_t end,
                                       Action* action) const {
    auto action_kind = [](const Token& t) -> std::optional<ActionKind> {
      if (t.kind != TokenKind::kIdent) return std::nullopt;
      if (t.text == "sendCommand") return ActionKind::kSendCommand;
      if (t.text == "postUpdate") return ActionKind::kPostUpdate;
      return std::nullopt;
    };
    size_t j = i;
    if (j + 1 < end && action_kind(tokens_[j]) &&
        tokens_[j + 1].kind == TokenKind::kLParen) {
      action->kind = *action_kind(tokens_[j]);
      action->method_syntax = false;
      j += 2;
      if (j >= end || (tokens_[j].kind != TokenKind::kIdent &&
                       tokens_[j].kind != TokenKind::kString)) {
        return std::nullopt;
      }
      action->item = tokens_[j].text;
      ++j;
      if (j >= end || tokens_[j].kind != TokenKind::kComma) return std::nullopt;
      ++j;
    } else if (j + 3 < end && tokens_[j].kind == TokenKind::kIdent &&
               tokens_[j + 1].kind == TokenKind::kDot &&
               action_kind(tokens_[j + 2]) &&
               tokens_[j + 3].kind == TokenKind::kLParen) {
      action->item = tokens_[j].text;
      action->kind = *action_kind(tokens_[j + 2]);
      action->method_syntax = true;
      j += 4;
    } else {
      return std::nullopt;
    }
    auto value = ParseValue(&j, end);
    if (!value || j >= end || tokens_[j].kind != TokenKind::kRParen) {
      return std::nullopt;
    }
    action->value = *value;
    action->text = TextOf(i, j + 1);
    action->span = SpanOf(i, j + 1);
    ++j;
    if (j < end && tokens_[j].kind == TokenKind::kSemicolon) ++j;
    if (j < end && !tokens_[j].starts_line &&
        tokens_[j].kind != TokenKind::kKwElse) {
      return std::nullopt;
    }
    return j;
  }

  size_t ParseStatement(size_t i, size_t end,
                        const std::vector<Condition>& guards, bool live) {
    const Token& t = tokens_[i];
    switch (t.kind) {
      case TokenKind::kSemicolon:
        return i + 1;
      case TokenKind::kLBrace: {
        size_t close = Matching(i, end);
        if (close == kNpos) {
          if (live) Warn(i, "unbalanced '{'");
          return end;
        }
        ParseBlock(i + 1, close, guards, live);
        return close + 1;
      }
      case TokenKind::kKwIf:
        return ParseIf(i, end, guards, live);
      case TokenKind::kKwElse:
        if (live) Warn(i, "dangling 'else'; statement skipped");
        return SkipStatement(i + 1, end);
      default:
        break;
    }
    Action action;
    if (auto next = TryParseAction(i, end, &action)) {
      if (live) {
        action.id = absl::StrCat(rule_id_, "a", ++action_count_);
        rule_->actions.push_back(GuardedAction{std::move(action), guards});
      }
      return *next;
    }
    size_t next = SkipStatement(i, end);
    if (live) {
      std::string text = TextOf(i, next);
      if (text.size() > 60) text = text.substr(0, 57) + "...";
      Warn(i, absl::StrCat("unsupported statement skipped: '", text, "'"));
    }
    return next;
  }

  const SourceFile& source_;
  const std::vector<Token>& tokens_;
  std::string rule_id_;
  int trigger_count_ = 0;
  int condition_count_ = 0;
  int action_count_ = 0;
  Rule* rule_ = nullptr;
  std::vector<Diagnostic>* diagnostics_ = nullptr;
};

Diagnostic ErrorAt(const SourceFile& source, const std::vector<Token>& tokens,
                   size_t token, std::string message) {
  size_t at = std::min(token, tokens.size() - 1);
  return Diagnostic{
      Severity::kError, std::move(message),
      source.Span(tokens[at].offset, tokens[at].end_offset())};
}

// Parses tokens [begin, end_kw] where tokens[begin] is `rule` and
// tokens[end_kw] is `end`.
std::variant<Rule, Diagnostic> ParseRuleBlock(const SourceFile& source,
                                              const std::vector<Token>& tokens,
                                              size_t begin, size_t end_kw,
                                              std::string rule_id,
                                              std::vector<Diagnostic>* warnings) {
  if (begin + 1 >= end_kw || tokens[begin + 1].kind != TokenKind::kString) {
    return ErrorAt(source, tokens, begin + 1,
                   "expected rule name string after 'rule'; rule skipped");
  }
  Rule rule;
  rule.id = rule_id;
  rule.name = tokens[begin + 1].text;
  std::string label = absl::StrCat("rule \"", rule.name, "\": ");
  if (begin + 2 >= end_kw || tokens[begin + 2].kind != TokenKind::kKwWhen) {
    return ErrorAt(source, tokens, begin + 2,
                   absl::StrCat(label, "expected 'when'; rule skipped"));
  }
  size_t when = begin + 2;
  size_t then = when + 1;
  while (then < end_kw && tokens[then].kind != TokenKind::kKwThen) ++then;
  if (then >= end_kw) {
    return ErrorAt(source, tokens, when,
                   absl::StrCat(label, "expected 'then'; rule skipped"));
  }
  RuleParser parser(source, tokens, rule_id);
  if (auto failure = parser.ParseTriggers(when + 1, then, &rule)) {
    return ErrorAt(source, tokens, failure->token,
                   absl::StrCat(label, failure->message, "; rule skipped"));
  }
  parser.ParseScript(then + 1, end_kw, &rule, warnings);
  rule.span = parser.SpanOf(begin, end_kw + 1);
  rule.trigger_clause =
      source.Span(tokens[when].end_offset(), tokens[then].offset);
  rule.end_keyword = parser.SpanOf(end_kw, end_kw + 1);
  return rule;
}

}  // namespace

RuleSet ParseRuleSet(const SourceFile& source) {
  RuleSet result;
  result.file_id = source.path();
  std::vector<Token> tokens = Tokenize(source);
  size_t i = 0;
  bool saw_rule_keyword = false;
  while (i < tokens.size()) {
    if (tokens[i].kind != TokenKind::kKwRule) {
      size_t k = i;
      while (k < tokens.size() && tokens[k].kind != TokenKind::kKwRule) ++k;
      result.diagnostics.push_back(Diagnostic{
          Severity::kWarning, "unsupported top-level content skipped",
          source.Span(tokens[i].offset, tokens[k - 1].end_offset())});
      i = k;
      continue;
    }
    saw_rule_keyword = true;
    size_t j = i + 1;
    while (j < tokens.size() && tokens[j].kind != TokenKind::kKwEnd &&
           tokens[j].kind != TokenKind::kKwRule) {
      ++j;
    }
    if (j == tokens.size() || tokens[j].kind == TokenKind::kKwRule) {
      std::string name = i + 1 < tokens.size() &&
                                 tokens[i + 1].kind == TokenKind::kString
                             ? absl::StrCat("rule \"", tokens[i + 1].text, "\": ")
                             : "";
      result.diagnostics.push_back(ErrorAt(
          source, tokens, i,
          absl::StrCat(name, "missing 'end'; rule skipped")));
      i = j;
      continue;
    }
    std::vector<Diagnostic> warnings;
    std::string rule_id = absl::StrCat("r", result.rules.size() + 1);
    auto parsed = ParseRuleBlock(source, tokens, i, j, rule_id, &warnings);
    if (std::holds_alternative<Rule>(parsed)) {
      result.rules.push_back(std::get<Rule>(std::move(parsed)));
      for (Diagnostic& w : warnings) result.diagnostics.push_back(std::move(w));
    } else {
      result.diagnostics.push_back(std::get<Diagnostic>(std::move(parsed)));
    }
    i = j + 1;
  }
  if (!tokens.empty() && !saw_rule_keyword) {
    result.diagnostics.push_back(
        ErrorAt(source, tokens, 0, "no rule blocks found"));
  }
  return result;
}

absl::StatusOr<TriggerClause> ParseTriggerClause(std::string_view text,
                                                 std::string_view rule_id) {
  SourceFile source("<trigger-clause>", std::string(text));
  std::vector<Token> tokens = Tokenize(source);
  RuleParser parser(source, tokens, std::string(rule_id));
  Rule rule;
  if (auto failure = parser.ParseTriggers(0, tokens.size(), &rule)) {
    return absl::InvalidArgumentError(failure->message);
  }
  return TriggerClause{std::move(rule.triggers), std::move(rule.conditions)};
}

ScriptBlock ParseScriptBlock(std::string_view text, std::string_view rule_id) {
  SourceFile source("<script>", std::string(text));
  std::vector<Token> tokens = Tokenize(source);
  RuleParser parser(source, tokens, std::string(rule_id));
  Rule rule;
  ScriptBlock block;
  parser.ParseScript(0, tokens.size(), &rule, &block.diagnostics);
  block.actions = std::move(rule.actions);
  return block;
}

}  // namespace ritscan
