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

#ifndef SNES_CMDP_HPP
#define SNES_CMDP_HPP

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snes/errors.hpp"
#include "snes/policy.hpp"
#include "snes/rng.hpp"

namespace snes {

/// Episode length bound n. Bounded semantics need at least two steps.
class Horizon {
 public:
  explicit Horizon(int n) : n_(n) {
    if (n < 2) throw ConfigError("horizon must be at least 2, got " + std::to_string(n));
  }
  int value() const { return n_; }

 private:
  int n_;
};

template <class State, class Action>
struct Transition {
  State pre_state;
  Action action;
  State post_state;
  double reward = 0.0;
  double cost = 0.0;
};

/// A finite rollout. The path of the episode is s_0 = initial_state followed
/// by the post-state of each transition, so it holds size() + 1 states.
template <class State, class Action>
struct Episode {
  State initial_state;
  std::vector<Transition<State, Action>> transitions;
  double initial_cost = 0.0;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }

  /// s_i for i in [0, size()].
  const State& state(std::size_t i) const {
    return i == 0 ? initial_state : transitions[i - 1].post_state;
  }
};

/// Undiscounted return: left fold of the rewards in step order.
template <class State, class Action>
double episode_return(const Episode<State, Action>& episode) {
  double total = 0.0;
  for (const auto& t : episode.transitions) total += t.reward;
  return total;
}

/// Initial-state cost plus the sum of recorded step costs.
template <class State, class Action>
double episode_cost(const Episode<State, Action>& episode) {
  double total = episode.initial_cost;
  for (const auto& t : episode.transitions) total += t.cost;
  return total;
}

/// Cost function of the CMDP. Empty members contribute zero.
template <class State>
struct CostSignal {
  std::function<double(const State&)> initial;
  std::function<double(const State& pre, const State& post)> step;
};

template <class State>
struct StepOutcome {
  State next;
  double reward = 0.0;
};

/// Generative model of a CMDP without its cost function.
///
/// States stay opaque to the policy, which sees only `observe(s)`. The
/// termination predicate is consulted after reset and after every step.
template <class E>
concept Environment = requires(const E& env, const typename E::State& s,
                               const typename E::Action& a, Rng& rng,
                               std::span<double> obs, std::span<const double> y) {
  { env.reset(rng) } -> std::same_as<typename E::State>;
  { env.step(s, a, rng) } -> std::same_as<StepOutcome<typename E::State>>;
  { env.terminal(s) } -> std::same_as<bool>;
  { env.observation_dim() } -> std::convertible_to<std::size_t>;
  { env.observe(s, obs) };
  { env.action_decoder() } -> std::convertible_to<ActionDecoder>;
  { env.decode(y) } -> std::same_as<typename E::Action>;
};

template <Environment E>
NetworkShape policy_shape(const E& env, std::size_t hidden_dim = 32) {
  return NetworkShape{env.observation_dim(), hidden_dim, decoder_arity(env.action_decoder())};
}

template <Environment E>
void check_policy_fits(const E& env, const PolicyParams& policy) {
  const NetworkShape expected = policy_shape(env, policy.shape().hidden_dim);
  if (policy.shape() != expected) {
    throw ConfigError("policy shape (" + std::to_string(policy.shape().input_dim) + "->" +
                      std::to_string(policy.shape().output_dim) +
                      ") does not match environment (" + std::to_string(expected.input_dim) +
                      "->" + std::to_string(expected.output_dim) + ")");
  }
}

/// Runs one episode of at most `horizon` steps.
///
/// The episode is a pure function of (env, policy, seed): reset sampling and
/// transition noise draw from separate sub-streams of `seed`.
template <Environment E>
Episode<typename E::State, typename E::Action> rollout(
    const E& env, const PolicyParams& policy, Horizon horizon, std::uint64_t seed,
    const CostSignal<typename E::State>& cost = {}) {
  check_policy_fits(env, policy);
  Rng reset_rng = make_rng(seed, Stream::kReset);
  Rng dynamics_rng = make_rng(seed, Stream::kDynamics);

  Episode<typename E::State, typename E::Action> episode{env.reset(reset_rng), {}, 0.0};
  if (cost.initial) episode.initial_cost = cost.initial(episode.initial_state);
  episode.transitions.reserve(static_cast<std::size_t>(horizon.value()));

  std::vector<double> observation(env.observation_dim());
  std::vector<double> output(policy.shape().output_dim);
  const typename E::State* current = &episode.initial_state;
  for (int t = 0; t < horizon.value() && !env.terminal(*current); ++t) {
    env.observe(*current, observation);
    policy.forward(observation, output);
    typename E::Action action = env.decode(output);
    StepOutcome<typename E::State> outcome = env.step(*current, action, dynamics_rng);
    const double c = cost.step ? cost.step(*current, outcome.next) : 0.0;
    episode.transitions.push_back({*current, std::move(action), std::move(outcome.next),
                                   outcome.reward, c});
    current = &episode.transitions.back().post_state;
  }
  return episode;
}

}  // namespace snes

#endif  // SNES_CMDP_HPP
