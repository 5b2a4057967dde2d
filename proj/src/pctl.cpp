/*
 * Copyright 2026 The SNES Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "snes/pctl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <system_error>

#include "snes/errors.hpp"

namespace snes::pctl {

struct StateFormula::Node {
  Kind kind;
  std::string name;
  std::optional<StateFormula> lhs;
  std::optional<StateFormula> rhs;
};

StateFormula StateFormula::True() {
  return StateFormula(std::make_shared<const Node>(Node{Kind::kTrue, {}, {}, {}}));
}

StateFormula StateFormula::Atom(std::string name) {
  return StateFormula(std::make_shared<const Node>(Node{Kind::kAtom, std::move(name), {}, {}}));
}

StateFormula StateFormula::And(StateFormula lhs, StateFormula rhs) {
  return StateFormula(
      std::make_shared<const Node>(Node{Kind::kAnd, {}, std::move(lhs), std::move(rhs)}));
}

StateFormula StateFormula::Not(StateFormula operand) {
  return StateFormula(
      std::make_shared<const Node>(Node{Kind::kNot, {}, std::move(operand), {}}));
}

StateFormula StateFormula::Or(StateFormula lhs, StateFormula rhs) {
  return Not(And(Not(std::move(lhs)), Not(std::move(rhs))));
}

StateFormula::Kind StateFormula::kind() const { return node_->kind; }
const std::string& StateFormula::atom() const { return node_->name; }
const StateFormula& StateFormula::lhs() const { return *node_->lhs; }
const StateFormula& StateFormula::rhs() const { return *node_->rhs; }
const StateFormula& StateFormula::operand() const { return *node_->lhs; }

bool StateFormula::is_disjunction() const {
  if (kind() != Kind::kNot) return false;
  const StateFormula& inner = operand();
  return inner.kind() == Kind::kAnd && inner.lhs().kind() == Kind::kNot &&
         inner.rhs().kind() == Kind::kNot;
}

std::vector<std::string> StateFormula::atoms() const {
  std::vector<std::string> out;
  std::vector<const StateFormula*> stack{this};
  while (!stack.empty()) {
    const StateFormula* f = stack.back();
    stack.pop_back();
    switch (f->kind()) {
      case Kind::kTrue:
        break;
      case Kind::kAtom:
        if (std::find(out.begin(), out.end(), f->atom()) == out.end()) out.push_back(f->atom());
        break;
      case Kind::kAnd:
        stack.push_back(&f->rhs());
        stack.push_back(&f->lhs());
        break;
      case Kind::kNot:
        stack.push_back(&f->operand());
        break;
    }
  }
  return out;
}

bool StateFormula::operator==(const StateFormula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::kTrue:
      return true;
    case Kind::kAtom:
      return atom() == other.atom();
    case Kind::kAnd:
      return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::kNot:
      return operand() == other.operand();
  }
  return false;
}

PathFormula PathFormula::Next(StateFormula f) {
  return PathFormula(Kind::kNext, StateFormula::True(), std::move(f), std::nullopt);
}

PathFormula PathFormula::Until(StateFormula hold, StateFormula goal) {
  return PathFormula(Kind::kUntil, std::move(hold), std::move(goal), std::nullopt);
}

PathFormula PathFormula::BoundedUntil(StateFormula hold, StateFormula goal, std::size_t bound) {
  return PathFormula(Kind::kBoundedUntil, std::move(hold), std::move(goal), bound);
}

PathFormula PathFormula::Always(StateFormula f) {
  return PathFormula(Kind::kAlways, StateFormula::True(), std::move(f), std::nullopt);
}

PathFormula PathFormula::Eventually(StateFormula f) {
  return PathFormula(Kind::kEventually, StateFormula::True(), std::move(f), std::nullopt);
}

Requirement::Requirement(PathFormula path_, double p, double c)
    : path(std::move(path_)), p_req(p), c_req(c) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RangeError("required probability must lie in (0, 1), got " + std::to_string(p));
  }
  if (!(c > 0.0 && c < 1.0)) {
    throw RangeError("required confidence must lie in (0, 1), got " + std::to_string(c));
  }
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser.

namespace {

enum class Tok { kIdent, kNumber, kLParen, kRParen, kLBracket, kRBracket, kBang, kAmp, kBar,
                 kGe, kLe, kEnd };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < src.size() && is_ident(src[i])) ++i;
      out.push_back({Tok::kIdent, src.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
        ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      out.push_back({Tok::kNumber, src.substr(start, i - start), start});
      continue;
    }
    if ((c == '>' || c == '<') && i + 1 < src.size() && src[i + 1] == '=') {
      out.push_back({c == '>' ? Tok::kGe : Tok::kLe, src.substr(start, 2), start});
      i += 2;
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '[': kind = Tok::kLBracket; break;
      case ']': kind = Tok::kRBracket; break;
      case '!': kind = Tok::kBang; break;
      case '&': kind = Tok::kAmp; break;
      case '|': kind = Tok::kBar; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, src.substr(start, 1), start});
    ++i;
  }
  out.push_back({Tok::kEnd, {}, src.size()});
  return out;
}

bool is_reserved(std::string_view word) {
  return word == "G" || word == "F" || word == "X" || word == "U" || word == "P" || word == "C" ||
         word == "with" || word == "true";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Requirement requirement() {
    keyword("P");
    expect(Tok::kLBracket, "'['");
    expect(Tok::kGe, "'>='");
    const double p = number();
    expect(Tok::kRBracket, "']'");
    expect(Tok::kLParen, "'('");
    PathFormula f = path();
    expect(Tok::kRParen, "')'");
    keyword("with");
    keyword("C");
    expect(Tok::kLBracket, "'['");
    expect(Tok::kGe, "'>='");
    const double c = number();
    expect(Tok::kRBracket, "']'");
    end();
    return Requirement(std::move(f), p, c);
  }

  PathFormula path() {
    const Token& t = peek();
    if (t.kind == Tok::kIdent && (t.text == "G" || t.text == "F" || t.text == "X")) {
      const std::string_view op = advance().text;
      StateFormula body = state();
      if (op == "G") return PathFormula::Always(std::move(body));
      if (op == "F") return PathFormula::Eventually(std::move(body));
      return PathFormula::Next(std::move(body));
    }
    StateFormula hold = state();
    keyword("U");
    if (peek().kind == Tok::kLBracket) {
      advance();
      expect(Tok::kLe, "'<='");
      const std::size_t bound = integer();
      expect(Tok::kRBracket, "']'");
      return PathFormula::BoundedUntil(std::move(hold), state(), bound);
    }
    return PathFormula::Until(std::move(hold), state());
  }

  StateFormula state() {
    StateFormula f = conjunction();
    while (peek().kind == Tok::kBar) {
      advance();
      f = StateFormula::Or(std::move(f), conjunction());
    }
    return f;
  }

  void end() {
    if (peek().kind != Tok::kEnd) throw ParseError("unexpected trailing input", peek().pos);
  }

 private:
  StateFormula conjunction() {
    StateFormula f = unary();
    while (peek().kind == Tok::kAmp) {
      advance();
      f = StateFormula::And(std::move(f), unary());
    }
    return f;
  }

  StateFormula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kBang:
        advance();
        return StateFormula::Not(unary());
      case Tok::kLParen: {
        advance();
        StateFormula f = state();
        expect(Tok::kRParen, "')'");
        return f;
      }
      case Tok::kIdent:
        if (t.text == "true") {
          advance();
          return StateFormula::True();
        }
        if (is_reserved(t.text)) {
          throw ParseError("reserved word '" + std::string(t.text) + "' used as atom", t.pos);
        }
        return StateFormula::Atom(std::string(advance().text));
      default:
        throw ParseError("expected state formula", t.pos);
    }
  }

  double number() {
    const Token& t = peek();
    if (t.kind != Tok::kNumber) throw ParseError("expected number", t.pos);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError("malformed number '" + std::string(t.text) + "'", t.pos);
    }
    advance();
    return value;
  }

  std::size_t integer() {
    const Token& t = peek();
    std::size_t value = 0;
    const auto [ptr, ec] =
        t.kind == Tok::kNumber
            ? std::from_chars(t.text.data(), t.text.data() + t.text.size(), value)
            : std::from_chars_result{t.text.data(), std::errc::invalid_argument};
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError("expected non-negative integer bound", t.pos);
    }
    advance();
    return value;
  }

  void keyword(std::string_view word) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || t.text != word) {
      throw ParseError("expected '" + std::string(word) + "'", t.pos);
    }
    advance();
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().pos);
    advance();
  }

  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_++]; }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

// Binding strength used by the unparser: | < & < unary.
constexpr int kOrLevel = 1;
constexpr int kAndLevel = 2;
constexpr int kUnaryLevel = 3;

void print_state(const StateFormula& f, int required, std::string& out) {
  auto wrap = [&](int level, auto&& body) {
    const bool parens = level < required;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  if (f.is_disjunction()) {
    const StateFormula& inner = f.operand();
    wrap(kOrLevel, [&] {
      print_state(inner.lhs().operand(), kOrLevel, out);
      out += " | ";
      print_state(inner.rhs().operand(), kAndLevel, out);
    });
    return;
  }
  switch (f.kind()) {
    case StateFormula::Kind::kTrue:
      out += "true";
      break;
    case StateFormula::Kind::kAtom:
      out += f.atom();
      break;
    case StateFormula::Kind::kAnd:
      wrap(kAndLevel, [&] {
        print_state(f.lhs(), kAndLevel, out);
        out += " & ";
        print_state(f.rhs(), kUnaryLevel, out);
      });
      break;
    case StateFormula::Kind::kNot:
      out += '!';
      print_state(f.operand(), kUnaryLevel, out);
      break;
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Requirement parse_requirement(std::string_view text) { return Parser(text).requirement(); }

PathFormula parse_path(std::string_view text) {
  Parser p(text);
  PathFormula f = p.path();
  p.end();
  return f;
}

StateFormula parse_state(std::string_view text) {
  Parser p(text);
  StateFormula f = p.state();
  p.end();
  return f;
}

std::string to_string(const StateFormula& f) {
  std::string out;
  print_state(f, kOrLevel, out);
  return out;
}

std::string to_string(const PathFormula& f) {
  std::string out;
  switch (f.kind()) {
    case PathFormula::Kind::kNext:
      out = "X ";
      print_state(f.body(), kUnaryLevel, out);
      break;
    case PathFormula::Kind::kAlways:
      out = "G ";
      print_state(f.body(), kUnaryLevel, out);
      break;
    case PathFormula::Kind::kEventually:
      out = "F ";
      print_state(f.body(), kUnaryLevel, out);
      break;
    case PathFormula::Kind::kUntil:
      print_state(f.hold(), kUnaryLevel, out);
      out += " U ";
      print_state(f.goal(), kUnaryLevel, out);
      break;
    case PathFormula::Kind::kBoundedUntil:
      print_state(f.hold(), kUnaryLevel, out);
      out += " U[<=" + std::to_string(*f.bound()) + "] ";
      print_state(f.goal(), kUnaryLevel, out);
      break;
  }
  return out;
}

std::string to_string(const Requirement& r) {
  return "P[>=" + format_number(r.p_req) + "](" + to_string(r.path) + ") with C[>=" +
         format_number(r.c_req) + "]";
}

// ---------------------------------------------------------------------------
// Finite-episode semantics.

namespace {

std::size_t path_length(std::size_t trace_size) {
  if (trace_size == 0) throw FormulaError("truth trace must contain at least the initial state");
  return trace_size - 1;
}

std::size_t until_bound(const PathFormula& f, std::size_t length) {
  if (f.kind() == PathFormula::Kind::kBoundedUntil) return std::min(*f.bound(), length);
  return length;
}

}  // namespace

bool satisfies_trace(const PathFormula& f, std::span<const char> hold, std::span<const char> goal) {
  const std::size_t length = path_length(goal.size());
  switch (f.kind()) {
    case PathFormula::Kind::kNext:
      if (length < 1) throw FormulaError("next operator is undefined on an episode without transitions");
      return goal[1] != 0;
    case PathFormula::Kind::kAlways:
      return std::all_of(goal.begin(), goal.end(), [](char b) { return b != 0; });
    case PathFormula::Kind::kUntil:
    case PathFormula::Kind::kBoundedUntil:
    case PathFormula::Kind::kEventually: {
      if (hold.size() != goal.size()) throw FormulaError("truth traces differ in length");
      const std::size_t bound = until_bound(f, length);
      for (std::size_t j = 0; j <= bound; ++j) {
        if (goal[j]) return true;
        if (!hold[j]) return false;
      }
      return false;
    }
  }
  return false;
}

double cumulative_cost_trace(const PathFormula& f, std::span<const double> hold_costs,
                             std::span<const double> goal_costs) {
  const std::size_t length = path_length(goal_costs.size());
  switch (f.kind()) {
    case PathFormula::Kind::kNext:
      if (length < 1) throw FormulaError("next operator is undefined on an episode without transitions");
      return goal_costs[1];
    case PathFormula::Kind::kAlways: {
      // C(G<=m) = c(s_0) + C'(m), C'(0) = 0, C'(m) = C(s_0, a_0, s_1) + C'(m-1) on the suffix.
      double total = goal_costs[0];
      for (std::size_t i = 1; i <= length; ++i) total += goal_costs[i];
      return total;
    }
    case PathFormula::Kind::kUntil:
    case PathFormula::Kind::kBoundedUntil:
    case PathFormula::Kind::kEventually: {
      if (hold_costs.size() != goal_costs.size()) throw FormulaError("cost traces differ in length");
      // C(U<=m) = c2(s_0) (c1(s_0) + C'(m)), C'(0) = 1,
      // C'(m) = C2(s_0, a_0, s_1) (C1(s_0, a_0, s_1) + C'(m-1)) on the suffix.
      // Unrolled from the innermost term outwards.
      const std::size_t bound = until_bound(f, length);
      double tail = 1.0;
      for (std::size_t k = bound; k >= 1; --k) tail = goal_costs[k] * (hold_costs[k] + tail);
      return goal_costs[0] * (hold_costs[0] + tail);
    }
  }
  return 0.0;
}

}  // namespace snes::pctl
