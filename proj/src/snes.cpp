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

#include "snes/snes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snes/errors.hpp"

namespace snes {

std::string_view to_string(LagrangianMode mode) {
  switch (mode) {
    case LagrangianMode::kBayesian:
      return "bayesian";
    case LagrangianMode::kMaxLikelihood:
      return "mle";
    case LagrangianMode::kUnconstrained:
      return "unconstrained";
  }
  return "unknown";
}

LagrangianMode parse_lagrangian_mode(std::string_view text) {
  if (text == "bayesian" || text == "snes") return LagrangianMode::kBayesian;
  if (text == "mle") return LagrangianMode::kMaxLikelihood;
  if (text == "unconstrained" || text == "es") return LagrangianMode::kUnconstrained;
  throw ConfigError("unknown mode '" + std::string(text) +
                    "' (expected bayesian, mle or unconstrained)");
}

double lambda_confidence(double c_sat, double c_req) {
  return std::max(0.0, c_sat - c_req) / (1.0 - c_req);
}

double lambda_mle(std::uint64_t satisfied, std::uint64_t trials, double p_req) {
  if (trials == 0) throw ConfigError("maximum likelihood estimate needs at least one trial");
  const double p_hat = static_cast<double>(satisfied) / static_cast<double>(trials);
  return std::max(0.0, p_hat - p_req) / (1.0 - p_req);
}

BetaPosterior SnesState::confidence_posterior(const SnesConfig& cfg) const {
  if (cfg.posterior_window == 0) return posterior;
  std::uint64_t s = 0;
  for (std::uint64_t k : recent_satisfied) s += k;
  const std::uint64_t trials = recent_satisfied.size() * cfg.es.population;
  return BetaPosterior(s, trials - s);
}

void snes_update(std::span<double> theta, const Perturbations& eps,
                 std::span<const double> returns, std::span<const double> costs, double lambda,
                 const ESConfig& cfg) {
  const std::vector<double> return_step = weighted_sum(eps, normalize(returns, cfg.std_estimator));
  const std::vector<double> cost_step = weighted_sum(eps, normalize(costs, cfg.std_estimator));
  if (return_step.size() != theta.size()) throw ConfigError("perturbation dimension mismatch");
  const double scale = cfg.alpha / (cfg.sigma * static_cast<double>(eps.size()));
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] += scale * lambda * return_step[k];
    theta[k] -= scale * (1.0 - lambda) * cost_step[k];
  }
}

GenerationReport snes_generation(SnesState& state, const SnesConfig& cfg,
                                 const pctl::Requirement& req, const OffspringEvaluator& evaluate,
                                 Rng& rng) {
  cfg.es.validate();
  const std::size_t n = cfg.es.population;
  const Perturbations eps = sample_perturbations(n, state.theta.size(), cfg.es.sigma, rng);

  GenerationReport report;
  report.offspring.resize(n);
  std::vector<double> returns(n), costs(n), candidate(state.theta.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < candidate.size(); ++k) candidate[k] = state.theta[k] + eps[i][k];
    const OffspringResult r = evaluate(candidate, i);
    if (!std::isfinite(r.episode_return) || !std::isfinite(r.cost)) {
      throw EvaluationError("generation " + std::to_string(state.generation + 1) + " offspring " +
                            std::to_string(i) + ": non-finite return " +
                            std::to_string(r.episode_return) + " or cost " +
                            std::to_string(r.cost));
    }
    report.offspring[i] = r;
    returns[i] = r.episode_return;
    costs[i] = r.cost;
    if (r.satisfied()) ++report.satisfied;
  }

  // Per-generation counts accumulate; s + v always equals the number of episodes.
  state.posterior = state.posterior.observed(report.satisfied, n - report.satisfied);
  if (cfg.posterior_window > 0) {
    state.recent_satisfied.push_back(report.satisfied);
    while (state.recent_satisfied.size() > cfg.posterior_window) state.recent_satisfied.pop_front();
  }
  const BetaPosterior evidence = state.confidence_posterior(cfg);
  state.c_sat = confidence_above(evidence, req.p_req);

  switch (cfg.mode) {
    case LagrangianMode::kBayesian:
      state.lambda = lambda_confidence(state.c_sat, req.c_req);
      break;
    case LagrangianMode::kMaxLikelihood:
      state.lambda = cfg.mle_estimate == MleEstimate::kCumulative
                         ? lambda_mle(evidence.satisfied(), evidence.trials(), req.p_req)
                         : lambda_mle(report.satisfied, n, req.p_req);
      break;
    case LagrangianMode::kUnconstrained:
      state.lambda = 1.0;
      break;
  }

  snes_update(state.theta, eps, returns, costs, state.lambda, cfg.es);
  ++state.generation;

  report.generation = state.generation;
  report.posterior = state.posterior;
  report.c_sat = state.c_sat;
  report.lambda = state.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    report.mean_return += returns[i];
    report.mean_cost += costs[i];
  }
  report.mean_return /= static_cast<double>(n);
  report.mean_cost /= static_cast<double>(n);
  return report;
}

}  // namespace snes
