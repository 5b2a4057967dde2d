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

#ifndef SNES_BAYES_HPP
#define SNES_BAYES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace snes {

/// Regularized incomplete beta function I_x(a, b), the CDF of Beta(a, b).
///
/// Continued fraction (modified Lentz) evaluated on whichever side of
/// x = (a + 1) / (a + b + 2) converges fastest. Throws DomainError when x is
/// outside [0, 1] or a, b are not positive.
double beta_cdf(double x, double a, double b);

/// Satisfaction/violation counts under a uniform Beta(1, 1) prior.
class BetaPosterior {
 public:
  constexpr BetaPosterior() = default;
  constexpr BetaPosterior(std::uint64_t satisfied, std::uint64_t violated)
      : satisfied_(satisfied), violated_(violated) {}

  constexpr std::uint64_t satisfied() const { return satisfied_; }
  constexpr std::uint64_t violated() const { return violated_; }
  constexpr std::uint64_t trials() const { return satisfied_ + violated_; }

  double alpha() const { return static_cast<double>(satisfied_) + 1.0; }
  double beta() const { return static_cast<double>(violated_) + 1.0; }

  /// Adds a batch of outcomes.
  constexpr BetaPosterior observed(std::uint64_t satisfied, std::uint64_t violated) const {
    return BetaPosterior(satisfied_ + satisfied, violated_ + violated);
  }

  constexpr bool operator==(const BetaPosterior&) const = default;

 private:
  std::uint64_t satisfied_ = 0;
  std::uint64_t violated_ = 0;
};

constexpr BetaPosterior update(const BetaPosterior& post, bool satisfied) {
  return satisfied ? post.observed(1, 0) : post.observed(0, 1);
}

/// Posterior mass above p_req: 1 - I_{p_req}(s + 1, v + 1).
double confidence_above(const BetaPosterior& post, double p_req);

enum class Outcome { kSatisfied, kViolated, kInconclusive };

std::string_view to_string(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::kInconclusive;
  double c_sat = 0.0;
  std::size_t episodes_used = 0;
  BetaPosterior posterior;
};

/// Sequential Bayesian test of p_sat >= p_req over Bernoulli trials.
///
/// `trial(k)` runs the k-th independent experiment and reports satisfaction.
/// Stops with kSatisfied once c_sat >= c_req, with kViolated once
/// 1 - c_sat >= c_req, and with kInconclusive after `max_episodes` trials.
Verdict sequential_verify(const std::function<bool(std::size_t)>& trial, double p_req,
                          double c_req, std::size_t max_episodes);

}  // namespace snes

#endif  // SNES_BAYES_HPP
