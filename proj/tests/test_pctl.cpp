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

#include <doctest.h>

#include <random>

#include "snes/envs.hpp"
#include "snes/errors.hpp"
#include "snes/labeling.hpp"
#include "snes/pctl.hpp"
#include "test_support.hpp"

using namespace snes;
using namespace snes::pctl;
using snes::test::Bits;
using snes::test::make_episode;
using snes::test::toy_labeling;

TEST_CASE("state formulas evaluate propositionally") {
  const auto lab = toy_labeling();
  CHECK(eval_state(StateFormula::True(), Bits{0}, lab));
  const auto a = StateFormula::Atom("a");
  for (unsigned m = 0; m < 8; ++m) {
    CHECK_FALSE(eval_state(StateFormula::And(a, StateFormula::Not(a)), Bits{m}, lab));
    CHECK(eval_state(StateFormula::Or(a, StateFormula::Atom("b")), Bits{m}, lab) ==
          ((m & 3U) != 0));
  }
  CHECK_THROWS_AS(eval_state(StateFormula::Atom("zzz"), Bits{0}, lab), FormulaError);
}

TEST_CASE("labeling rejects duplicate atoms") {
  Labeling<Bits> lab;
  lab.add("a", [](const Bits&) { return true; });
  CHECK_THROWS_AS(lab.add("a", [](const Bits&) { return false; }), FormulaError);
}

TEST_CASE("collision_free is false inside the exclusion radius") {
  envs::ParticleDance env;
  envs::ParticleDance::State s;
  s.x_agent = {0.0, 0.0};
  s.x_particle = {0.05, 0.0};
  CHECK_FALSE(eval_state(StateFormula::Atom("collision_free"), s, env.labeling()));
}

TEST_CASE("satisfaction clauses") {
  const auto lab = toy_labeling();
  const auto a = StateFormula::Atom("a");
  const auto b = StateFormula::Atom("b");

  CHECK(satisfies(make_episode({1, 1, 1, 1}), PathFormula::Always(a), lab));
  CHECK_FALSE(satisfies(make_episode({1, 0, 1, 1}), PathFormula::Always(a), lab));

  // m = 0 degenerates to s_0 |= goal
  CHECK(satisfies(make_episode({2, 0, 0}), PathFormula::BoundedUntil(a, b, 0), lab));
  CHECK_FALSE(satisfies(make_episode({1, 2, 0}), PathFormula::BoundedUntil(a, b, 0), lab));
  CHECK(satisfies(make_episode({1, 2, 0}), PathFormula::BoundedUntil(a, b, 1), lab));

  CHECK(satisfies(make_episode({0, 1}), PathFormula::Next(a), lab));
  CHECK_FALSE(satisfies(make_episode({1, 0}), PathFormula::Next(a), lab));
  CHECK_THROWS_AS(satisfies(make_episode({1}), PathFormula::Next(a), lab), FormulaError);

  CHECK(satisfies(make_episode({1, 1, 1, 2}), PathFormula::Until(a, b), lab));
  CHECK_FALSE(satisfies(make_episode({1, 0, 1, 2}), PathFormula::Until(a, b), lab));
  CHECK(satisfies(make_episode({0, 0, 0, 2}), PathFormula::Eventually(b), lab));
  CHECK_FALSE(satisfies(make_episode({0, 0, 0, 0}), PathFormula::Eventually(b), lab));
}

TEST_CASE("random paths match the quantifier oracle") {
  std::mt19937_64 rng(7);
  const auto lab = toy_labeling();
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<unsigned> path(5);
    for (auto& m : path) m = rng() % 4;
    const auto f = snes::test::random_path_formula(rng, 2, trial % 5);
    CHECK(satisfies(make_episode(path), f, lab) == snes::test::oracle_satisfies(f, path));
  }
}

TEST_CASE("cumulative cost examples") {
  const auto lab = toy_labeling();
  const auto a = StateFormula::Atom("a");
  const auto b = StateFormula::Atom("b");
  CHECK(cumulative_cost(make_episode({0, 1, 0}), PathFormula::Always(a), lab) == 2.0);
  CHECK(cumulative_cost(make_episode({1, 1, 1}), PathFormula::Always(a), lab) == 0.0);
  CHECK(cumulative_cost(make_episode({2, 0, 0}), PathFormula::BoundedUntil(a, b, 2), lab) == 0.0);
  CHECK(cumulative_cost(make_episode({1, 0}), PathFormula::Next(a), lab) == 1.0);
  // Both arguments violated at s_0, no goal anywhere: 1 + (1 + (1 + 1)) unrolled on {0,0,0}.
  CHECK(cumulative_cost(make_episode({0, 0, 0}), PathFormula::Until(a, b), lab) == 4.0);
}

TEST_CASE("cumulative cost matches the unrolled recursion") {
  std::mt19937_64 rng(11);
  const auto lab = toy_labeling();
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<unsigned> path(1 + rng() % 8);
    for (auto& m : path) m = rng() % 8;
    const int form = path.size() == 1 ? 1 + trial % 4 : trial % 5;
    const auto f = snes::test::random_path_formula(rng, 3, form);
    CHECK(cumulative_cost(make_episode(path), f, lab) == snes::test::oracle_cost(f, path));
  }
}

TEST_CASE("step cost and severity") {
  const auto lab = toy_labeling();
  const auto a = StateFormula::Atom("a");
  CHECK(step_cost(a, Bits{0}, Bits{1}, lab) == 0.0);
  CHECK(step_cost(a, Bits{1}, Bits{0}, lab) == 1.0);
  const Severity<Bits> sev = [](const Bits&) { return 2.5; };
  CHECK(step_cost(a, Bits{1}, Bits{0}, lab, sev) == 2.5);
  // c(s_0) stays a unit penalty; later violations take the severity.
  CHECK(cumulative_cost(make_episode({0, 0, 1}), PathFormula::Always(a), lab, sev) == 3.5);
}

TEST_CASE("eventually agrees with true-until") {
  std::mt19937_64 rng(3);
  const auto lab = toy_labeling();
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<unsigned> path(1 + rng() % 10);
    for (auto& m : path) m = rng() % 8;
    const auto phi = snes::test::random_state_formula(rng, 3, 2);
    const auto e = make_episode(path);
    const auto ev = PathFormula::Eventually(phi);
    const auto tu = PathFormula::Until(StateFormula::True(), phi);
    CHECK(satisfies(e, ev, lab) == satisfies(e, tu, lab));
    CHECK(cumulative_cost(e, ev, lab) == cumulative_cost(e, tu, lab));
  }
}

TEST_CASE("always cost is monotone in violations") {
  std::mt19937_64 rng(5);
  const auto lab = toy_labeling();
  const auto f = PathFormula::Always(StateFormula::Atom("a"));
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<unsigned> path(2 + rng() % 9, 1U);
    double previous = cumulative_cost(make_episode(path), f, lab);
    CHECK(previous == 0.0);
    std::vector<std::size_t> order(path.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      path[i] = 0;
      const double next = cumulative_cost(make_episode(path), f, lab);
      CHECK(next >= previous);
      previous = next;
    }
  }
}

TEST_CASE("parse benchmark requirements") {
  const auto pd = parse_requirement("P[>=0.85](G (collision_free | within_budget)) with C[>=0.98]");
  CHECK(pd.path == PathFormula::Always(StateFormula::Or(StateFormula::Atom("collision_free"),
                                                        StateFormula::Atom("within_budget"))));
  CHECK(pd.p_req == 0.85);
  CHECK(pd.c_req == 0.98);

  const auto orun = parse_requirement("P[>=0.9](G safe) with C[>=0.98]");
  CHECK(orun.path == PathFormula::Always(StateFormula::Atom("safe")));
  CHECK(orun.p_req == 0.9);
  CHECK(orun.c_req == 0.98);

  CHECK_THROWS_AS(parse_requirement("P[>=1.5](G a) with C[>=0.9]"), RangeError);
  CHECK_THROWS_AS(parse_requirement("P[>=0.5](G a) with C[>=1]"), RangeError);
}

TEST_CASE("parser precedence and forms") {
  const auto a = StateFormula::Atom("a");
  const auto b = StateFormula::Atom("b");
  const auto c = StateFormula::Atom("c");
  CHECK(parse_state("a | b & !c") == StateFormula::Or(a, StateFormula::And(b, StateFormula::Not(c))));
  CHECK(parse_state("!a & b") == StateFormula::And(StateFormula::Not(a), b));
  CHECK(parse_state("(a | b) & c") == StateFormula::And(StateFormula::Or(a, b), c));
  CHECK(parse_path("a U[<=3] b") == PathFormula::BoundedUntil(a, b, 3));
  CHECK(parse_path("a U b") == PathFormula::Until(a, b));
  CHECK(parse_path("F !a") == PathFormula::Eventually(StateFormula::Not(a)));
  CHECK(parse_path("X true") == PathFormula::Next(StateFormula::True()));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_requirement("P[>=0.5](G a &) with C[>=0.9]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 14);
  }
  CHECK_THROWS_AS(parse_path("G"), ParseError);
  CHECK_THROWS_AS(parse_path("a"), ParseError);
  CHECK_THROWS_AS(parse_state("a b"), ParseError);
  CHECK_THROWS_AS(parse_requirement("P[>=0.5](G a)"), ParseError);
}

TEST_CASE("unparse round-trips") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto f = snes::test::random_path_formula(rng, 3, trial % 5);
    const Requirement r(f, 0.05 + 0.9 * (rng() % 1000) / 1000.0, 0.5 + (rng() % 499) / 1000.0);
    const std::string text = to_string(r);
    CHECK(parse_requirement(text) == r);
  }
}
