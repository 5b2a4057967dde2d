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

#ifndef SNES_TESTS_TEST_SUPPORT_HPP
#define SNES_TESTS_TEST_SUPPORT_HPP

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "snes/cmdp.hpp"
#include "snes/labeling.hpp"
#include "snes/pctl.hpp"

namespace snes::test {

// Toy labelled chain: a state is a bitmask over atoms a, b, c.
struct Bits {
  unsigned mask = 0;
};

using ToyEpisode = Episode<Bits, int>;

inline pctl::Labeling<Bits> toy_labeling() {
  pctl::Labeling<Bits> lab;
  lab.add("a", [](const Bits& s) { return (s.mask & 1U) != 0; });
  lab.add("b", [](const Bits& s) { return (s.mask & 2U) != 0; });
  lab.add("c", [](const Bits& s) { return (s.mask & 4U) != 0; });
  return lab;
}

inline ToyEpisode make_episode(const std::vector<unsigned>& path) {
  ToyEpisode e{Bits{path.at(0)}, {}, 0.0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    e.transitions.push_back({Bits{path[i - 1]}, 0, Bits{path[i]}, 0.0, 0.0});
  }
  return e;
}

// Direct structural evaluation, independent of pctl::compile.
inline bool holds(const pctl::StateFormula& f, unsigned mask) {
  using K = pctl::StateFormula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return true;
    case K::kAtom: {
      const unsigned bit = f.atom() == "a" ? 1U : f.atom() == "b" ? 2U : 4U;
      return (mask & bit) != 0;
    }
    case K::kAnd:
      return holds(f.lhs(), mask) && holds(f.rhs(), mask);
    case K::kNot:
      return !holds(f.operand(), mask);
  }
  return false;
}

// Quantifier-clause oracle over the path s_0..s_L.
inline bool oracle_satisfies(const pctl::PathFormula& f, const std::vector<unsigned>& path) {
  using K = pctl::PathFormula::Kind;
  const std::size_t last = path.size() - 1;
  switch (f.kind()) {
    case K::kNext:
      return holds(f.body(), path.at(1));
    case K::kAlways:
      for (std::size_t k = 0; k <= last; ++k) {
        if (!holds(f.body(), path[k])) return false;
      }
      return true;
    case K::kUntil:
    case K::kBoundedUntil:
    case K::kEventually: {
      std::size_t top = last;
      if (f.kind() == K::kBoundedUntil) top = std::min<std::size_t>(*f.bound(), last);
      for (std::size_t j = 0; j <= top; ++j) {
        if (!holds(f.goal(), path[j])) continue;
        bool prefix = true;
        for (std::size_t k = 0; k < j; ++k) prefix = prefix && holds(f.hold(), path[k]);
        if (prefix) return true;
      }
      return false;
    }
  }
  return false;
}

inline double unit(bool ok) { return ok ? 0.0 : 1.0; }

// Cost recursion unrolled literally on suffixes of the path.
inline double oracle_until_tail(const pctl::PathFormula& f, const std::vector<unsigned>& path,
                                std::size_t i, std::size_t m) {
  if (m == 0) return 1.0;
  return unit(holds(f.goal(), path[i + 1])) *
         (unit(holds(f.hold(), path[i + 1])) + oracle_until_tail(f, path, i + 1, m - 1));
}

inline double oracle_cost(const pctl::PathFormula& f, const std::vector<unsigned>& path) {
  using K = pctl::PathFormula::Kind;
  const std::size_t last = path.size() - 1;
  switch (f.kind()) {
    case K::kNext:
      return unit(holds(f.body(), path.at(1)));
    case K::kAlways: {
      double c = unit(holds(f.body(), path[0]));
      for (std::size_t i = 1; i <= last; ++i) c += unit(holds(f.body(), path[i]));
      return c;
    }
    default: {
      std::size_t m = last;
      if (f.kind() == K::kBoundedUntil) m = std::min<std::size_t>(*f.bound(), last);
      return unit(holds(f.goal(), path[0])) *
             (unit(holds(f.hold(), path[0])) + oracle_until_tail(f, path, 0, m));
    }
  }
}

inline pctl::StateFormula random_state_formula(std::mt19937_64& rng, int atoms, int depth) {
  using pctl::StateFormula;
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  const char* names[] = {"a", "b", "c"};
  std::uniform_int_distribution<int> atom(0, atoms - 1);
  switch (pick(rng)) {
    case 0:
      return StateFormula::Atom(names[atom(rng)]);
    case 1:
      return rng() % 8 == 0 ? StateFormula::True() : StateFormula::Atom(names[atom(rng)]);
    case 2:
      return StateFormula::Not(random_state_formula(rng, atoms, depth - 1));
    case 3:
      return StateFormula::And(random_state_formula(rng, atoms, depth - 1),
                               random_state_formula(rng, atoms, depth - 1));
    default:
      return StateFormula::Or(random_state_formula(rng, atoms, depth - 1),
                              random_state_formula(rng, atoms, depth - 1));
  }
}

inline pctl::PathFormula random_path_formula(std::mt19937_64& rng, int atoms, int form) {
  using pctl::PathFormula;
  auto f = [&] { return random_state_formula(rng, atoms, 2); };
  switch (form) {
    case 0:
      return PathFormula::Next(f());
    case 1: {
      auto hold = f();
      return PathFormula::Until(hold, f());
    }
    case 2: {
      auto hold = f();
      return PathFormula::BoundedUntil(hold, f(), rng() % 12);
    }
    case 3:
      return PathFormula::Always(f());
    default:
      return PathFormula::Eventually(f());
  }
}

}  // namespace snes::test

#endif  // SNES_TESTS_TEST_SUPPORT_HPP
