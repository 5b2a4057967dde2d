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

#ifndef SNES_SNES_HPP
#define SNES_SNES_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "snes/bayes.hpp"
#include "snes/es.hpp"
#include "snes/pctl.hpp"
#include "snes/rng.hpp"

namespace snes {

enum class LagrangianMode {
  kBayesian,       // lambda from posterior confidence c_sat
  kMaxLikelihood,  // lambda from the point estimate s / trials
  kUnconstrained,  // lambda pinned to 1
};

enum class MleEstimate {
  kCumulative,     // all trials so far
  kPerGeneration,  // the current generation's N trials
};

std::string_view to_string(LagrangianMode mode);
LagrangianMode parse_lagrangian_mode(std::string_view text);

struct SnesConfig {
  ESConfig es;
  LagrangianMode mode = LagrangianMode::kBayesian;
  MleEstimate mle_estimate = MleEstimate::kCumulative;
  /// Generations feeding c_sat; 0 keeps the whole training history.
  std::size_t posterior_window = 0;
};

/// max(0, c_sat - c_req) / (1 - c_req)
double lambda_confidence(double c_sat, double c_req);

/// max(0, s / trials - p_req) / (1 - p_req). Throws ConfigError if trials == 0.
double lambda_mle(std::uint64_t satisfied, std::uint64_t trials, double p_req);

struct OffspringResult {
  double episode_return = 0.0;
  double cost = 0.0;
  bool satisfied() const { return cost == 0.0; }
};

struct SnesState {
  std::vector<double> theta;
  BetaPosterior posterior;                  // every training episode so far
  std::deque<std::uint64_t> recent_satisfied;  // per-generation s, windowed mode only
  double lambda = 1.0;
  double c_sat = 0.0;
  std::size_t generation = 0;

  explicit SnesState(std::vector<double> initial_theta) : theta(std::move(initial_theta)) {}

  /// Posterior restricted to the configured window.
  BetaPosterior confidence_posterior(const SnesConfig& cfg) const;
};

struct GenerationReport {
  std::size_t generation = 0;  // 1-based
  std::vector<OffspringResult> offspring;
  std::uint64_t satisfied = 0;
  BetaPosterior posterior;
  double c_sat = 0.0;
  double lambda = 0.0;
  double mean_return = 0.0;
  double mean_cost = 0.0;
};

using OffspringEvaluator =
    std::function<OffspringResult(std::span<const double> params, std::size_t index)>;

/// theta += alpha lambda / (sigma N) sum_j R_j eps_j
///        - alpha (1 - lambda) / (sigma N) sum_j C_j eps_j
/// with R and C normalized separately.
void snes_update(std::span<double> theta, const Perturbations& eps,
                 std::span<const double> returns, std::span<const double> costs, double lambda,
                 const ESConfig& cfg);

/// One SNES generation: perturb, evaluate one episode per offspring, count
/// satisfying episodes into the running posterior, set lambda for the mode,
/// and apply the dual update. Throws EvaluationError on non-finite results.
GenerationReport snes_generation(SnesState& state, const SnesConfig& cfg,
                                 const pctl::Requirement& req, const OffspringEvaluator& evaluate,
                                 Rng& rng);

}  // namespace snes

#endif  // SNES_SNES_HPP
