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

#ifndef SNES_VERIFY_HPP
#define SNES_VERIFY_HPP

#include <cstdint>

#include "snes/bayes.hpp"
#include "snes/cmdp.hpp"
#include "snes/labeling.hpp"

namespace snes {

/// Bayesian verification of a frozen policy: roll out, score the episode
/// with the requirement's cumulative cost, count it as satisfying iff that
/// cost is zero, and stop on the first confident verdict or at the cap.
template <Environment E>
Verdict bayesian_verify(const E& env, const PolicyParams& policy, const pctl::Requirement& req,
                        const pctl::Labeling<typename E::State>& lab, Horizon horizon,
                        std::size_t max_episodes, std::uint64_t seed) {
  check_policy_fits(env, policy);
  const pctl::PathEvaluator<typename E::State> evaluator(req.path, lab);
  return sequential_verify(
      [&](std::size_t k) {
        const auto episode =
            rollout(env, policy, horizon, derive_seed(seed, Stream::kEpisode, k));
        return evaluator.cumulative_cost(episode) == 0.0;
      },
      req.p_req, req.c_req, max_episodes);
}

}  // namespace snes

#endif  // SNES_VERIFY_HPP
