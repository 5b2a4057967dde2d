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

#ifndef SNES_ENVS_HPP
#define SNES_ENVS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "snes/cmdp.hpp"
#include "snes/labeling.hpp"

namespace snes::envs {

using Vec2 = std::array<double, 2>;
using Cell = std::array<int, 2>;

enum class DistanceMetric { kEuclidean, kChebyshev };

double distance(const Vec2& a, const Vec2& b, DistanceMetric metric = DistanceMetric::kEuclidean);

// ---------------------------------------------------------------------------
// Particle Dance: follow a randomly accelerating particle without getting
// closer than d_min more than n_max times.

struct ParticleDanceState {
  Vec2 x_agent{};
  Vec2 x_particle{};
  Vec2 v_agent{};
  Vec2 v_particle{};
  int collisions = 0;  // not observed by the policy

  bool operator==(const ParticleDanceState&) const = default;
};

struct ParticleDanceConfig {
  double d_min = 0.1;
  int n_max = 1;
  DistanceMetric metric = DistanceMetric::kEuclidean;
};

class ParticleDance {
 public:
  using State = ParticleDanceState;
  using Action = Vec2;

  static constexpr double kPositionBound = 2.0;
  static constexpr double kVelocityBound = 0.1;
  static constexpr double kActionBound = 0.1;
  static constexpr double kResetBound = 1.0;

  explicit ParticleDance(ParticleDanceConfig cfg = {}) : cfg_(cfg) {}

  const ParticleDanceConfig& config() const { return cfg_; }

  /// Positions uniform in [-1, 1]^2, velocities and counter zero.
  State reset(Rng& rng) const;

  /// Particle velocity, particle position, agent velocity, agent position,
  /// collision counter; each assignment is clipped to its box before the
  /// next. Reward is the negative post-step distance.
  StepOutcome<State> step(const State& s, const Action& a, Rng& rng) const;

  bool terminal(const State&) const { return false; }
  std::size_t observation_dim() const { return 8; }
  void observe(const State& s, std::span<double> out) const;
  ActionDecoder action_decoder() const { return ContinuousBox{{kActionBound, kActionBound}}; }
  Action decode(std::span<const double> y) const;

  double agent_particle_distance(const State& s) const {
    return distance(s.x_agent, s.x_particle, cfg_.metric);
  }

  /// collision_free, within_budget, and safe = collision_free | within_budget.
  pctl::Labeling<State> labeling() const;

  static std::string default_requirement(double p_req = 0.85, double c_req = 0.98);

 private:
  ParticleDanceConfig cfg_;
};

// ---------------------------------------------------------------------------
// Obstacle Run: reach the target cell (0, 0) on a 5x5 grid while a randomly
// moving obstacle wanders around.

struct ObstacleRunState {
  Cell x_agent{};
  Cell x_obstacle{};
  int collisions = 0;  // not observed by the policy

  bool operator==(const ObstacleRunState&) const = default;
};

struct ObstacleRunConfig {
  int n_max = 4;
};

class ObstacleRun {
 public:
  using State = ObstacleRunState;
  using Action = std::size_t;  // index into kMoves

  static constexpr int kGridMax = 4;
  static constexpr Cell kTarget{0, 0};
  static constexpr std::array<Cell, 5> kMoves{{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

  explicit ObstacleRun(ObstacleRunConfig cfg = {}) : cfg_(cfg) {}

  const ObstacleRunConfig& config() const { return cfg_; }

  /// Agent and obstacle uniform on the grid, counter zero.
  State reset(Rng& rng) const;

  /// Obstacle takes a uniformly drawn move, then the agent moves; both clip
  /// to the grid. A shared cell counts as a collision. Reward is -1.
  StepOutcome<State> step(const State& s, const Action& a, Rng& rng) const;

  bool terminal(const State& s) const { return s.x_agent == kTarget; }
  std::size_t observation_dim() const { return 4; }
  void observe(const State& s, std::span<double> out) const;
  ActionDecoder action_decoder() const { return DiscreteArgmax{kMoves.size()}; }
  Action decode(std::span<const double> y) const;

  /// off_target, within_budget, and safe = off_target | within_budget.
  pctl::Labeling<State> labeling() const;

  static std::string default_requirement(double p_req = 0.9, double c_req = 0.98);

 private:
  ObstacleRunConfig cfg_;
};

// ---------------------------------------------------------------------------
// Coin: a toy CMDP whose episodes are safe with a fixed probability,
// independently of the policy. Used to exercise the verifier end to end.

struct CoinState {
  bool safe = true;
  int steps = 0;

  bool operator==(const CoinState&) const = default;
};

class Coin {
 public:
  using State = CoinState;
  using Action = std::size_t;

  explicit Coin(double p_safe = 1.0);

  double p_safe() const { return p_safe_; }

  State reset(Rng& rng) const;
  StepOutcome<State> step(const State& s, const Action& a, Rng& rng) const;
  bool terminal(const State&) const { return false; }
  std::size_t observation_dim() const { return 1; }
  void observe(const State& s, std::span<double> out) const;
  ActionDecoder action_decoder() const { return DiscreteArgmax{1}; }
  Action decode(std::span<const double>) const { return 0; }

  /// safe
  pctl::Labeling<State> labeling() const;

  static std::string default_requirement(double p_req = 0.5, double c_req = 0.9);

 private:
  double p_safe_;
};

}  // namespace snes::envs

#endif  // SNES_ENVS_HPP
