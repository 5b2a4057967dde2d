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

#include <algorithm>
#include <cmath>
#include <random>

#include "snes/cmdp.hpp"
#include "snes/envs.hpp"
#include "snes/labeling.hpp"

using namespace snes;
using namespace snes::envs;

namespace {

double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    worst = std::max({worst, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return worst;
}

bool in_bounds(const ParticleDance::State& s) {
  for (int k = 0; k < 2; ++k) {
    if (std::abs(s.x_agent[k]) > 2.0 || std::abs(s.x_particle[k]) > 2.0) return false;
    if (std::abs(s.v_agent[k]) > 0.1 || std::abs(s.v_particle[k]) > 0.1) return false;
  }
  return true;
}

bool in_grid(const Cell& c) { return c[0] >= 0 && c[0] <= 4 && c[1] >= 0 && c[1] <= 4; }

}  // namespace

TEST_CASE("particle dance reset") {
  const ParticleDance env;
  Rng rng(1);
  std::array<std::vector<double>, 4> marginals;
  for (int i = 0; i < 10000; ++i) {
    const auto s = env.reset(rng);
    CHECK(s.v_agent == Vec2{0.0, 0.0});
    CHECK(s.v_particle == Vec2{0.0, 0.0});
    CHECK(s.collisions == 0);
    marginals[0].push_back(s.x_agent[0]);
    marginals[1].push_back(s.x_agent[1]);
    marginals[2].push_back(s.x_particle[0]);
    marginals[3].push_back(s.x_particle[1]);
  }
  // 1.63 / sqrt(n) is the 1% critical value of the one-sample KS statistic.
  for (const auto& m : marginals) CHECK(ks_uniform(m, -1.0, 1.0) < 1.63 / std::sqrt(10000.0));
  Rng a(5), b(5);
  CHECK(env.reset(a) == env.reset(b));
}

TEST_CASE("particle dance clips at the boundary") {
  const ParticleDance env;
  ParticleDance::State s;
  s.x_agent = {2.0, 2.0};
  s.v_agent = {0.1, 0.1};
  Rng rng(2);
  const auto out = env.step(s, Vec2{0.1, 0.1}, rng);
  CHECK(out.next.x_agent == Vec2{2.0, 2.0});
  CHECK(out.next.v_agent == Vec2{0.1, 0.1});
}

TEST_CASE("particle dance collision and reward") {
  const ParticleDance env;
  ParticleDance::State s;
  s.x_particle = {0.3, -0.4};
  Rng probe(3);
  const Vec2 particle_next = env.step(s, Vec2{0.0, 0.0}, probe).next.x_particle;
  s.x_agent = {particle_next[0] + 0.05, particle_next[1]};
  Rng rng(3);
  const auto out = env.step(s, Vec2{0.0, 0.0}, rng);
  CHECK(out.next.collisions == 1);
  CHECK(out.reward == doctest::Approx(-0.05).epsilon(1e-12));

  s.x_agent = {particle_next[0] + 0.5, particle_next[1]};
  Rng again(3);
  CHECK(env.step(s, Vec2{0.0, 0.0}, again).next.collisions == 0);
}

TEST_CASE("particle dance labeling") {
  const ParticleDance env(ParticleDanceConfig{0.1, 1, DistanceMetric::kEuclidean});
  const auto lab = env.labeling();
  const auto phi = pctl::parse_state("collision_free | within_budget");
  ParticleDance::State s;
  s.x_agent = {0.0, 0.0};
  s.x_particle = {0.5, 0.0};
  CHECK(pctl::eval_state(phi, s, lab));
  s.x_particle = {0.05, 0.0};
  s.collisions = 1;
  CHECK(pctl::eval_state(phi, s, lab));
  s.collisions = 2;
  CHECK_FALSE(pctl::eval_state(phi, s, lab));
  CHECK(pctl::eval_state(pctl::parse_state("safe"), s, lab) == pctl::eval_state(phi, s, lab));
}

TEST_CASE("chebyshev metric") {
  CHECK(distance({0.0, 0.0}, {0.3, -0.4}) == doctest::Approx(0.5));
  CHECK(distance({0.0, 0.0}, {0.3, -0.4}, DistanceMetric::kChebyshev) == doctest::Approx(0.4));
}

TEST_CASE("particle dance trajectories stay bounded and recount collisions") {
  const ParticleDance env(ParticleDanceConfig{0.3, 1, DistanceMetric::kEuclidean});
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const PolicyParams policy = PolicyParams::random(policy_shape(env), rng, 1.0);
    const auto e = rollout(env, policy, Horizon(50), rng());
    REQUIRE(e.size() == 50);
    int recount = 0;
    CHECK(in_bounds(e.initial_state));
    for (const auto& t : e.transitions) {
      CHECK(in_bounds(t.post_state));
      CHECK(t.post_state.collisions >= t.pre_state.collisions);
      if (distance(t.post_state.x_agent, t.post_state.x_particle) < 0.3) ++recount;
      CHECK(t.reward == doctest::Approx(-distance(t.post_state.x_agent, t.post_state.x_particle)));
    }
    CHECK(e.transitions.back().post_state.collisions == recount);
  }
}

TEST_CASE("observations hide the collision counter") {
  const ParticleDance pd;
  const ObstacleRun orun;
  CHECK(pd.observation_dim() == 8);
  CHECK(orun.observation_dim() == 4);
  ParticleDance::State s;
  s.x_agent = {0.1, 0.2};
  s.x_particle = {0.3, 0.4};
  s.v_agent = {0.01, 0.02};
  s.v_particle = {0.03, 0.04};
  std::vector<double> a(8), b(8);
  pd.observe(s, a);
  s.collisions = 7;
  pd.observe(s, b);
  CHECK(a == b);
  CHECK(a == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.01, 0.02, 0.03, 0.04});
}

TEST_CASE("obstacle run moves") {
  const ObstacleRun env;
  Rng rng(5);
  ObstacleRun::State s;
  s.x_agent = {1, 0};
  s.x_obstacle = {4, 4};
  const auto out = env.step(s, 3, rng);  // (-1, 0)
  CHECK(out.next.x_agent == Cell{0, 0});
  CHECK(env.terminal(out.next));
  CHECK(out.reward == -1.0);

  s.x_agent = {0, 4};
  CHECK(env.step(s, 2, rng).next.x_agent == Cell{0, 4});  // (0, 1) clips
}

TEST_CASE("obstacle run collision") {
  const ObstacleRun env;
  ObstacleRun::State s;
  s.x_agent = {2, 1};
  s.x_obstacle = {2, 2};
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 100 && !seen; ++seed) {
    Rng rng(seed);
    const auto out = env.step(s, 2, rng);  // agent moves to (2, 2)
    REQUIRE(out.next.x_agent == Cell{2, 2});
    if (out.next.x_obstacle == Cell{2, 2}) {
      seen = true;
      CHECK(out.next.collisions == 1);
    } else {
      CHECK(out.next.collisions == 0);
    }
  }
  CHECK(seen);
}

TEST_CASE("obstacle run trajectories") {
  const ObstacleRun env;
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const PolicyParams policy = PolicyParams::random(policy_shape(env), rng, 1.0);
    const auto e = rollout(env, policy, Horizon(50), rng());
    CHECK(e.size() <= 50);
    if (e.size() < 50) CHECK(env.terminal(e.state(e.size())));
    int recount = 0;
    for (std::size_t i = 0; i <= e.size(); ++i) {
      CHECK(in_grid(e.state(i).x_agent));
      CHECK(in_grid(e.state(i).x_obstacle));
      if (i < e.size()) CHECK_FALSE(env.terminal(e.state(i)));
      if (i > 0 && e.state(i).x_agent == e.state(i).x_obstacle) ++recount;
    }
    CHECK(e.state(e.size()).collisions == recount);
    CHECK(episode_return(e) == -static_cast<double>(e.size()));
  }
}

TEST_CASE("obstacle run labeling") {
  const ObstacleRun env(ObstacleRunConfig{4});
  const auto lab = env.labeling();
  const auto phi = pctl::parse_state("off_target | within_budget");
  ObstacleRun::State s;
  s.x_agent = {0, 0};
  s.collisions = 5;
  CHECK_FALSE(pctl::eval_state(phi, s, lab));
  s.collisions = 4;
  CHECK(pctl::eval_state(phi, s, lab));
  s.x_agent = {1, 0};
  s.collisions = 9;
  CHECK(pctl::eval_state(phi, s, lab));
}

TEST_CASE("default requirements parse") {
  const auto pd = pctl::parse_requirement(ParticleDance::default_requirement());
  CHECK(pd.p_req == 0.85);
  CHECK(pd.c_req == 0.98);
  const auto orun = pctl::parse_requirement(ObstacleRun::default_requirement());
  CHECK(orun.p_req == 0.9);
  CHECK(orun.c_req == 0.98);
  CHECK(pctl::parse_requirement(Coin::default_requirement()).path ==
        pctl::PathFormula::Always(pctl::StateFormula::Atom("safe")));
}
