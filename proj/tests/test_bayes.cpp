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

#include <cmath>
#include <random>

#include "snes/bayes.hpp"
#include "snes/envs.hpp"
#include "snes/errors.hpp"
#include "snes/verify.hpp"

#include "beta_quadrature.hpp"

using namespace snes;
using snes::test::beta_cdf_quadrature;

TEST_CASE("beta_cdf examples") {
  CHECK(beta_cdf(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(beta_cdf(0.85, 2, 1) - 0.85 * 0.85) <= 1e-12);
  CHECK(std::abs(beta_cdf(0.5, 5, 1) - std::pow(0.5, 5)) <= 1e-12);
  CHECK(beta_cdf(0.0, 3, 4) == 0.0);
  CHECK(beta_cdf(1.0, 3, 4) == 1.0);
  CHECK_THROWS_AS(beta_cdf(-0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(beta_cdf(1.1, 1, 1), DomainError);
  CHECK_THROWS_AS(beta_cdf(0.5, 0, 1), DomainError);
}

TEST_CASE("beta_cdf closed forms") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> shape(0.05, 200.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = unit(rng);
    const double a = shape(rng);
    CHECK(std::abs(beta_cdf(x, a, 1.0) - std::pow(x, a)) <= 1e-12);
    CHECK(std::abs(beta_cdf(x, 1.0, a) - (1.0 - std::pow(1.0 - x, a))) <= 1e-12);
  }
}

TEST_CASE("beta_cdf agrees with quadrature") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> shape(1.0, 200.0);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double x = unit(rng), a = shape(rng), b = shape(rng);
    worst = std::max(worst, std::abs(beta_cdf(x, a, b) - beta_cdf_quadrature(x, a, b)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("beta_cdf stays accurate at training-scale counts") {
  // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a) and the x^a closed form at large a.
  for (double a : {1000.0, 20000.0, 60000.0}) {
    for (double b : {1.0, 50.0, 3000.0, 9000.0}) {
      for (double x : {0.8, 0.85, 0.9, 0.95, 0.99}) {
        const double lhs = beta_cdf(x, a, b);
        CHECK(std::isfinite(lhs));
        CHECK(std::abs(lhs - (1.0 - beta_cdf(1.0 - x, b, a))) <= 1e-10);
      }
    }
    CHECK(std::abs(beta_cdf(0.9999, a, 1.0) - std::pow(0.9999, a)) <= 1e-10);
  }
}

TEST_CASE("confidence_above examples") {
  CHECK(confidence_above(BetaPosterior(0, 0), 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(confidence_above(BetaPosterior(1, 0), 0.85) - (1.0 - 0.85 * 0.85)) <= 1e-12);
  CHECK(std::abs(confidence_above(BetaPosterior(4, 0), 0.5) - (1.0 - std::pow(0.5, 5))) <= 1e-12);
  CHECK(std::abs(confidence_above(BetaPosterior(20, 0), 0.85) - (1.0 - std::pow(0.85, 21))) <=
        1e-12);
}

TEST_CASE("confidence complements the cdf") {
  for (std::uint64_t s = 0; s < 30; s += 3) {
    for (std::uint64_t v = 0; v < 30; v += 4) {
      for (double p : {0.1, 0.5, 0.85, 0.98}) {
        const BetaPosterior post(s, v);
        CHECK(confidence_above(post, p) + beta_cdf(p, post.alpha(), post.beta()) ==
              doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("confidence is monotone") {
  for (std::uint64_t s = 0; s < 40; s += 5) {
    for (std::uint64_t v = 0; v < 40; v += 5) {
      const BetaPosterior post(s, v);
      double previous = 2.0;
      for (double p = 0.05; p < 0.96; p += 0.05) {
        const double c = confidence_above(post, p);
        // Strict unless the value has saturated at a floating-point bound.
        CHECK((c < previous || previous == 0.0 || c == 1.0));
        CHECK(c <= previous);
        previous = c;
      }
      CHECK(confidence_above(post.observed(1, 0), 0.6) > confidence_above(post, 0.6));
      CHECK(confidence_above(post.observed(0, 1), 0.6) < confidence_above(post, 0.6));
    }
  }
}

TEST_CASE("posterior updates") {
  CHECK(update(BetaPosterior(0, 0), true) == BetaPosterior(1, 0));
  CHECK(update(BetaPosterior(3, 2), false) == BetaPosterior(3, 3));
  BetaPosterior post;
  for (std::uint64_t k = 1; k <= 50; ++k) {
    post = update(post, true);
    CHECK(post == BetaPosterior(k, 0));
  }
}

TEST_CASE("verification of an always-safe toy environment") {
  const envs::Coin safe(1.0);
  const PolicyParams policy(policy_shape(safe));
  const Horizon horizon(5);

  // c_sat after s straight successes is 1 - 0.5^(s+1): 0.75, 0.875, 0.9375.
  const auto req = pctl::parse_requirement(envs::Coin::default_requirement(0.5, 0.9));
  const Verdict v = bayesian_verify(safe, policy, req, safe.labeling(), horizon, 100, 1);
  CHECK(v.outcome == Outcome::kSatisfied);
  CHECK(v.episodes_used == 3);
  CHECK(v.c_sat == doctest::Approx(0.9375).epsilon(1e-12));
  CHECK(v.posterior == BetaPosterior(3, 0));

  const auto strict = pctl::parse_requirement(envs::Coin::default_requirement(0.5, 0.95));
  CHECK(bayesian_verify(safe, policy, strict, safe.labeling(), horizon, 100, 1).episodes_used == 4);
}

TEST_CASE("verification of an always-unsafe toy environment") {
  const envs::Coin unsafe(0.0);
  const PolicyParams policy(policy_shape(unsafe));
  const auto req = pctl::parse_requirement(envs::Coin::default_requirement(0.5, 0.9));
  const Verdict v = bayesian_verify(unsafe, policy, req, unsafe.labeling(), Horizon(5), 100, 1);
  CHECK(v.outcome == Outcome::kViolated);
  CHECK(v.episodes_used == 3);
  CHECK(1.0 - v.c_sat >= 0.9);
}

TEST_CASE("borderline stream hits the cap") {
  const envs::Coin coin(0.5);
  const PolicyParams policy(policy_shape(coin));
  const auto req = pctl::parse_requirement(envs::Coin::default_requirement(0.5, 0.9999));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Verdict v = bayesian_verify(coin, policy, req, coin.labeling(), Horizon(5), 10, seed);
    CHECK(v.outcome == Outcome::kInconclusive);
    CHECK(v.posterior.trials() == 10);
    CHECK(v.episodes_used == 10);
  }
  const auto loose = pctl::parse_requirement(envs::Coin::default_requirement(0.5, 0.9));
  CHECK(bayesian_verify(coin, policy, loose, coin.labeling(), Horizon(5), 1, 0).outcome ==
        Outcome::kInconclusive);
}

TEST_CASE("sequential verdict invariants") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int run = 0; run < 200; ++run) {
    const double p = unit(rng);
    std::bernoulli_distribution coin(p);
    const Verdict v = sequential_verify([&](std::size_t) { return coin(rng); }, 0.7, 0.95, 300);
    CHECK(v.posterior.trials() == v.episodes_used);
    if (v.outcome == Outcome::kSatisfied) CHECK(v.c_sat >= 0.95);
    if (v.outcome == Outcome::kViolated) CHECK(1.0 - v.c_sat >= 0.95);
  }
}

TEST_CASE("verifier calibration") {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p_req = 0.8, c_req = 0.98;
  int satisfied = 0, false_positive = 0;
  for (int run = 0; run < 500; ++run) {
    const double p = unit(rng);
    std::bernoulli_distribution coin(p);
    const Verdict v = sequential_verify([&](std::size_t) { return coin(rng); }, p_req, c_req, 1000);
    if (v.outcome != Outcome::kSatisfied) continue;
    ++satisfied;
    if (p < p_req) ++false_positive;
  }
  REQUIRE(satisfied > 0);
  const double rate = static_cast<double>(false_positive) / satisfied;
  const double se = std::sqrt(0.02 * 0.98 / satisfied);
  CHECK(rate <= 0.02 + 3.0 * se);
}
