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

#include "snes/envs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "snes/errors.hpp"
#include "snes/pctl.hpp"

namespace snes::envs {

namespace {

double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

int clip_cell(int v) { return std::clamp(v, 0, ObstacleRun::kGridMax); }

std::string requirement_text(double p_req, double c_req) {
  return pctl::to_string(pctl::Requirement(pctl::parse_path("G (safe)"), p_req, c_req));
}

}  // namespace

double distance(const Vec2& a, const Vec2& b, DistanceMetric metric) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  if (metric == DistanceMetric::kChebyshev) return std::max(std::fabs(dx), std::fabs(dy));
  return std::sqrt(dx * dx + dy * dy);
}

// ---------------------------------------------------------------------------

ParticleDance::State ParticleDance::reset(Rng& rng) const {
  std::uniform_real_distribution<double> u(-kResetBound, kResetBound);
  State s;
  s.x_agent = {u(rng), u(rng)};
  s.x_particle = {u(rng), u(rng)};
  return s;
}

StepOutcome<ParticleDance::State> ParticleDance::step(const State& s, const Action& a,
                                                      Rng& rng) const {
  std::uniform_real_distribution<double> accel(-kVelocityBound, kVelocityBound);
  State n = s;
  for (int k = 0; k < 2; ++k) n.v_particle[k] = clip(n.v_particle[k] + accel(rng), kVelocityBound);
  for (int k = 0; k < 2; ++k) n.x_particle[k] = clip(n.x_particle[k] + n.v_particle[k], kPositionBound);
  for (int k = 0; k < 2; ++k) n.v_agent[k] = clip(n.v_agent[k] + a[k], kVelocityBound);
  for (int k = 0; k < 2; ++k) n.x_agent[k] = clip(n.x_agent[k] + n.v_agent[k], kPositionBound);
  const double d = agent_particle_distance(n);
  if (d < cfg_.d_min) ++n.collisions;
  return {n, -d};
}

void ParticleDance::observe(const State& s, std::span<double> out) const {
  out[0] = s.x_agent[0];
  out[1] = s.x_agent[1];
  out[2] = s.x_particle[0];
  out[3] = s.x_particle[1];
  out[4] = s.v_agent[0];
  out[5] = s.v_agent[1];
  out[6] = s.v_particle[0];
  out[7] = s.v_particle[1];
}

ParticleDance::Action ParticleDance::decode(std::span<const double> y) const {
  const auto scaled = std::get<std::vector<double>>(decode_action(action_decoder(), y));
  return {scaled[0], scaled[1]};
}

pctl::Labeling<ParticleDance::State> ParticleDance::labeling() const {
  const ParticleDanceConfig cfg = cfg_;
  auto collision_free = [cfg](const State& s) {
    return distance(s.x_agent, s.x_particle, cfg.metric) >= cfg.d_min;
  };
  auto within_budget = [cfg](const State& s) { return s.collisions <= cfg.n_max; };
  pctl::Labeling<State> lab;
  lab.add("collision_free", collision_free);
  lab.add("within_budget", within_budget);
  lab.add("safe", [=](const State& s) { return collision_free(s) || within_budget(s); });
  return lab;
}

std::string ParticleDance::default_requirement(double p_req, double c_req) {
  return pctl::to_string(pctl::Requirement(
      pctl::parse_path("G (collision_free | within_budget)"), p_req, c_req));
}

// ---------------------------------------------------------------------------

ObstacleRun::State ObstacleRun::reset(Rng& rng) const {
  std::uniform_int_distribution<int> u(0, kGridMax);
  State s;
  s.x_agent = {u(rng), u(rng)};
  s.x_obstacle = {u(rng), u(rng)};
  return s;
}

StepOutcome<ObstacleRun::State> ObstacleRun::step(const State& s, const Action& a,
                                                  Rng& rng) const {
  if (a >= kMoves.size()) throw ConfigError("obstacle run action index out of range");
  std::uniform_int_distribution<std::size_t> pick(0, kMoves.size() - 1);
  const Cell& drift = kMoves[pick(rng)];
  const Cell& move = kMoves[a];
  State n = s;
  for (int k = 0; k < 2; ++k) n.x_obstacle[k] = clip_cell(n.x_obstacle[k] + drift[k]);
  for (int k = 0; k < 2; ++k) n.x_agent[k] = clip_cell(n.x_agent[k] + move[k]);
  if (n.x_agent == n.x_obstacle) ++n.collisions;
  return {n, -1.0};
}

void ObstacleRun::observe(const State& s, std::span<double> out) const {
  out[0] = s.x_agent[0];
  out[1] = s.x_agent[1];
  out[2] = s.x_obstacle[0];
  out[3] = s.x_obstacle[1];
}

ObstacleRun::Action ObstacleRun::decode(std::span<const double> y) const {
  return std::get<std::size_t>(decode_action(action_decoder(), y));
}

pctl::Labeling<ObstacleRun::State> ObstacleRun::labeling() const {
  const int n_max = cfg_.n_max;
  auto off_target = [](const State& s) { return s.x_agent != kTarget; };
  auto within_budget = [n_max](const State& s) { return s.collisions <= n_max; };
  pctl::Labeling<State> lab;
  lab.add("off_target", off_target);
  lab.add("within_budget", within_budget);
  lab.add("safe", [=](const State& s) { return off_target(s) || within_budget(s); });
  return lab;
}

std::string ObstacleRun::default_requirement(double p_req, double c_req) {
  return pctl::to_string(pctl::Requirement(
      pctl::parse_path("G (off_target | within_budget)"), p_req, c_req));
}

// ---------------------------------------------------------------------------

Coin::Coin(double p_safe) : p_safe_(p_safe) {
  if (!(p_safe >= 0.0 && p_safe <= 1.0)) throw ConfigError("coin probability must lie in [0, 1]");
}

Coin::State Coin::reset(Rng& rng) const {
  std::bernoulli_distribution safe(p_safe_);
  return State{safe(rng), 0};
}

StepOutcome<Coin::State> Coin::step(const State& s, const Action&, Rng&) const {
  return {State{s.safe, s.steps + 1}, 0.0};
}

void Coin::observe(const State&, std::span<double> out) const { out[0] = 0.0; }

pctl::Labeling<Coin::State> Coin::labeling() const {
  pctl::Labeling<State> lab;
  lab.add("safe", [](const State& s) { return s.safe; });
  return lab;
}

std::string Coin::default_requirement(double p_req, double c_req) {
  return requirement_text(p_req, c_req);
}

}  // namespace snes::envs
