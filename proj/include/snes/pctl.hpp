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

#ifndef SNES_PCTL_HPP
#define SNES_PCTL_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace snes::pctl {

/// Propositional state formula over atoms: true, a, f & g, !f.
/// Disjunction is the derived form !(!f & !g).
class StateFormula {
 public:
  enum class Kind { kTrue, kAtom, kAnd, kNot };

  static StateFormula True();
  static StateFormula Atom(std::string name);
  static StateFormula And(StateFormula lhs, StateFormula rhs);
  static StateFormula Not(StateFormula operand);
  static StateFormula Or(StateFormula lhs, StateFormula rhs);

  Kind kind() const;
  const std::string& atom() const;
  const StateFormula& lhs() const;
  const StateFormula& rhs() const;
  const StateFormula& operand() const;

  /// Matches the !(!f & !g) encoding of f | g.
  bool is_disjunction() const;

  /// Atom names in first-occurrence order, without duplicates.
  std::vector<std::string> atoms() const;

  bool operator==(const StateFormula& other) const;

 private:
  struct Node;
  explicit StateFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Path formula with a single temporal modality.
class PathFormula {
 public:
  enum class Kind { kNext, kUntil, kBoundedUntil, kAlways, kEventually };

  static PathFormula Next(StateFormula f);
  static PathFormula Until(StateFormula hold, StateFormula goal);
  static PathFormula BoundedUntil(StateFormula hold, StateFormula goal, std::size_t bound);
  static PathFormula Always(StateFormula f);
  static PathFormula Eventually(StateFormula f);

  Kind kind() const { return kind_; }

  /// The single argument of X, G and F.
  const StateFormula& body() const { return goal_; }
  /// Left argument of U; `true` for F.
  const StateFormula& hold() const { return hold_; }
  /// Right argument of U; the argument of X, G and F.
  const StateFormula& goal() const { return goal_; }
  std::optional<std::size_t> bound() const { return bound_; }

  bool is_until_form() const {
    return kind_ == Kind::kUntil || kind_ == Kind::kBoundedUntil || kind_ == Kind::kEventually;
  }

  bool operator==(const PathFormula&) const = default;

 private:
  PathFormula(Kind kind, StateFormula hold, StateFormula goal, std::optional<std::size_t> bound)
      : kind_(kind), hold_(std::move(hold)), goal_(std::move(goal)), bound_(bound) {}

  Kind kind_;
  StateFormula hold_;
  StateFormula goal_;
  std::optional<std::size_t> bound_;
};

/// P[>= p_req](path) with C[>= c_req].
struct Requirement {
  PathFormula path;
  double p_req;
  double c_req;

  /// Throws RangeError unless both bounds lie in the open interval (0, 1).
  Requirement(PathFormula path, double p_req, double c_req);

  bool operator==(const Requirement&) const = default;
};

/// Grammar:
///   requirement := "P" "[" ">=" number "]" "(" path ")" "with" "C" "[" ">=" number "]"
///   path        := "G" state | "F" state | "X" state | state "U" state
///                | state "U" "[" "<=" integer "]" state
///   state       := conj { "|" conj }
///   conj        := unary { "&" unary }
///   unary       := "!" unary | "true" | identifier | "(" state ")"
/// G, F, X, U, P, C and `with` are reserved words.
Requirement parse_requirement(std::string_view text);
PathFormula parse_path(std::string_view text);
StateFormula parse_state(std::string_view text);

std::string to_string(const StateFormula& f);
std::string to_string(const PathFormula& f);
std::string to_string(const Requirement& r);

// Semantics on truth traces. A trace holds one entry per path state s_0..s_L
// where L is the number of transitions; the realized L is the bound n.

/// Finite-episode satisfaction. `hold` is ignored for X and G.
/// Throws FormulaError for X on a path without transitions, or when the
/// traces disagree in length.
bool satisfies_trace(const PathFormula& f, std::span<const char> hold, std::span<const char> goal);

/// Recursive cumulative cost. Entry 0 of each cost trace is the initial-state
/// cost c(s_0); entry i > 0 is the step cost C(s_{i-1}, a_{i-1}, s_i).
/// Unbounded U and G use the realized length as bound; U[<=m] with m larger
/// than the path is truncated to the path.
double cumulative_cost_trace(const PathFormula& f, std::span<const double> hold_costs,
                             std::span<const double> goal_costs);

}  // namespace snes::pctl

#endif  // SNES_PCTL_HPP
