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

#ifndef SNES_ES_HPP
#define SNES_ES_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "snes/rng.hpp"

namespace snes {

enum class StdEstimator {
  kPopulation,  // divide by N
  kSample,      // divide by N - 1
};

struct ESConfig {
  std::size_t population = 20;
  double sigma = 0.1;
  double alpha = 0.01;
  StdEstimator std_estimator = StdEstimator::kPopulation;

  /// Throws ConfigError unless N >= 2, sigma > 0 and alpha in (0, 1].
  void validate() const;
};

/// (x - mean) / std elementwise; all zeros when std < 1e-8.
/// Throws ConfigError for fewer than two values.
std::vector<double> normalize(std::span<const double> values,
                              StdEstimator estimator = StdEstimator::kPopulation);

/// One offspring perturbation per row, each entry ~ Normal(0, sigma).
using Perturbations = std::vector<std::vector<double>>;

Perturbations sample_perturbations(std::size_t population, std::size_t dim, double sigma,
                                   Rng& rng);

/// sum_j weights[j] * eps[j], accumulated in offspring order.
std::vector<double> weighted_sum(const Perturbations& eps, std::span<const double> weights);

/// theta += alpha / (sigma N) * sum_j normalize(returns)_j eps_j.
void es_update(std::span<double> theta, const Perturbations& eps, std::span<const double> returns,
               const ESConfig& cfg);

/// Fitness of the perturbed parameters of offspring `index`.
using Fitness = std::function<double(std::span<const double> params, std::size_t index)>;

/// Samples N offspring, evaluates each once, and returns the updated
/// parameters. Throws EvaluationError on a non-finite fitness.
std::vector<double> es_generation(std::span<const double> theta, const ESConfig& cfg,
                                  const Fitness& evaluate, Rng& rng);

}  // namespace snes

#endif  // SNES_ES_HPP
