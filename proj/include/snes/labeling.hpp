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

#ifndef SNES_LABELING_HPP
#define SNES_LABELING_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "snes/cmdp.hpp"
#include "snes/errors.hpp"
#include "snes/pctl.hpp"

namespace snes::pctl {

/// Atom name -> predicate over environment states.
template <class State>
class Labeling {
 public:
  using Predicate = std::function<bool(const State&)>;

  /// Throws FormulaError if `name` is already bound.
  Labeling& add(std::string name, Predicate predicate) {
    auto [it, inserted] = predicates_.emplace(std::move(name), std::move(predicate));
    if (!inserted) throw FormulaError("atom '" + it->first + "' bound twice");
    return *this;
  }

  const Predicate& at(const std::string& name) const {
    auto it = predicates_.find(name);
    if (it == predicates_.end()) throw FormulaError("unknown atom '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return predicates_.count(name) != 0; }

 private:
  std::map<std::string, Predicate> predicates_;
};

/// Resolves every atom once; evaluation afterwards never looks up names.
template <class State>
std::function<bool(const State&)> compile(const StateFormula& f, const Labeling<State>& lab) {
  switch (f.kind()) {
    case StateFormula::Kind::kTrue:
      return [](const State&) { return true; };
    case StateFormula::Kind::kAtom:
      return lab.at(f.atom());
    case StateFormula::Kind::kAnd: {
      auto lhs = compile(f.lhs(), lab);
      auto rhs = compile(f.rhs(), lab);
      return [lhs = std::move(lhs), rhs = std::move(rhs)](const State& s) { return lhs(s) && rhs(s); };
    }
    case StateFormula::Kind::kNot: {
      auto inner = compile(f.operand(), lab);
      return [inner = std::move(inner)](const State& s) { return !inner(s); };
    }
  }
  throw FormulaError("unhandled state formula kind");
}

template <class State>
bool eval_state(const StateFormula& f, const State& s, const Labeling<State>& lab) {
  return compile(f, lab)(s);
}

/// Optional violation severity; unset means unit penalty.
template <class State>
using Severity = std::function<double(const State&)>;

/// C_phi(s, a, s'): 0 when s' satisfies phi, otherwise 1 or the severity of s'.
template <class State>
double step_cost(const StateFormula& f, const State& /*pre*/, const State& post,
                 const Labeling<State>& lab, const Severity<State>& severity = {}) {
  if (eval_state(f, post, lab)) return 0.0;
  return severity ? severity(post) : 1.0;
}

/// A path formula bound to a labeling, ready to score many episodes.
template <class State>
class PathEvaluator {
 public:
  PathEvaluator(PathFormula formula, const Labeling<State>& lab, Severity<State> severity = {})
      : formula_(std::move(formula)),
        hold_(compile(formula_.hold(), lab)),
        goal_(compile(formula_.goal(), lab)),
        severity_(std::move(severity)) {}

  const PathFormula& formula() const { return formula_; }

  template <class Action>
  bool satisfies(const Episode<State, Action>& e) const {
    std::vector<char> hold, goal;
    truth_traces(e, hold, goal);
    return satisfies_trace(formula_, hold, goal);
  }

  template <class Action>
  double cumulative_cost(const Episode<State, Action>& e) const {
    const std::size_t n = e.size() + 1;
    std::vector<double> hold(n), goal(n);
    for (std::size_t i = 0; i < n; ++i) {
      const State& s = e.state(i);
      hold[i] = formula_.is_until_form() ? cost_of(hold_, s, i) : 0.0;
      goal[i] = cost_of(goal_, s, i);
    }
    return cumulative_cost_trace(formula_, hold, goal);
  }

  /// Cost signal of the formula's goal argument, for recording per-step
  /// costs during rollout. For G phi its episode sum equals cumulative_cost.
  CostSignal<State> cost_signal() const {
    CostSignal<State> signal;
    signal.initial = [goal = goal_](const State& s) { return goal(s) ? 0.0 : 1.0; };
    signal.step = [goal = goal_, severity = severity_](const State&, const State& post) {
      if (goal(post)) return 0.0;
      return severity ? severity(post) : 1.0;
    };
    return signal;
  }

 private:
  template <class Action>
  void truth_traces(const Episode<State, Action>& e, std::vector<char>& hold,
                    std::vector<char>& goal) const {
    const std::size_t n = e.size() + 1;
    hold.resize(n);
    goal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const State& s = e.state(i);
      hold[i] = formula_.is_until_form() ? static_cast<char>(hold_(s)) : 1;
      goal[i] = static_cast<char>(goal_(s));
    }
  }

  // c_phi(s_0) is a unit cost; step costs use the severity hook when set.
  double cost_of(const std::function<bool(const State&)>& pred, const State& s,
                 std::size_t index) const {
    if (pred(s)) return 0.0;
    return (index > 0 && severity_) ? severity_(s) : 1.0;
  }

  PathFormula formula_;
  std::function<bool(const State&)> hold_;
  std::function<bool(const State&)> goal_;
  Severity<State> severity_;
};

template <class State, class Action>
bool satisfies(const Episode<State, Action>& e, const PathFormula& f, const Labeling<State>& lab) {
  return PathEvaluator<State>(f, lab).satisfies(e);
}

template <class State, class Action>
double cumulative_cost(const Episode<State, Action>& e, const PathFormula& f,
                       const Labeling<State>& lab, const Severity<State>& severity = {}) {
  return PathEvaluator<State>(f, lab, severity).cumulative_cost(e);
}

}  // namespace snes::pctl

#endif  // SNES_LABELING_HPP
