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

#include "snes/es.hpp"

#include <cmath>
#include <string>

#include "snes/errors.hpp"

namespace snes {

void ESConfig::validate() const {
  if (population < 2) throw ConfigError("population must be at least 2");
  if (!(sigma > 0.0)) throw ConfigError("perturbation rate sigma must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("learning rate alpha must lie in (0, 1]");
}

std::vector<double> normalize(std::span<const double> values, StdEstimator estimator) {
  if (values.size() < 2) throw ConfigError("normalize needs at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double denom = estimator == StdEstimator::kPopulation ? n : n - 1.0;
  const double std = std::sqrt(ss / denom);

  std::vector<double> out(values.size(), 0.0);
  if (std < 1e-8) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / std;
  return out;
}

Perturbations sample_perturbations(std::size_t population, std::size_t dim, double sigma,
                                   Rng& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Perturbations eps(population, std::vector<double>(dim));
  for (auto& row : eps) {
    for (double& e : row) e = normal(rng);
  }
  return eps;
}

std::vector<double> weighted_sum(const Perturbations& eps, std::span<const double> weights) {
  if (eps.size() != weights.size()) throw ConfigError("one weight per perturbation required");
  std::vector<double> sum(eps.empty() ? 0 : eps.front().size(), 0.0);
  for (std::size_t j = 0; j < eps.size(); ++j) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += weights[j] * eps[j][k];
  }
  return sum;
}

void es_update(std::span<double> theta, const Perturbations& eps, std::span<const double> returns,
               const ESConfig& cfg) {
  const std::vector<double> weights = normalize(returns, cfg.std_estimator);
  const std::vector<double> step = weighted_sum(eps, weights);
  if (step.size() != theta.size()) throw ConfigError("perturbation dimension mismatch");
  const double scale = cfg.alpha / (cfg.sigma * static_cast<double>(eps.size()));
  for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += scale * step[k];
}

std::vector<double> es_generation(std::span<const double> theta, const ESConfig& cfg,
                                  const Fitness& evaluate, Rng& rng) {
  cfg.validate();
  const Perturbations eps = sample_perturbations(cfg.population, theta.size(), cfg.sigma, rng);
  std::vector<double> returns(cfg.population);
  std::vector<double> candidate(theta.size());
  for (std::size_t i = 0; i < cfg.population; ++i) {
    for (std::size_t k = 0; k < theta.size(); ++k) candidate[k] = theta[k] + eps[i][k];
    returns[i] = evaluate(candidate, i);
    if (!std::isfinite(returns[i])) {
      throw EvaluationError("offspring " + std::to_string(i) + " returned non-finite fitness " +
                            std::to_string(returns[i]));
    }
  }
  std::vector<double> next(theta.begin(), theta.end());
  es_update(next, eps, returns, cfg);
  return next;
}

}  // namespace snes
