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

#include "snes/bayes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "snes/errors.hpp"

namespace snes {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kTolerance = 1e-12;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (Numerical Recipes betacf, modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTolerance) return h;
  }
  return h;
}

}  // namespace

double beta_cdf(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_cdf: x must lie in [0, 1], got " + std::to_string(x));
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_cdf: shape parameters must be positive");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double confidence_above(const BetaPosterior& post, double p_req) {
  return 1.0 - beta_cdf(p_req, post.alpha(), post.beta());
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSatisfied:
      return "satisfied";
    case Outcome::kViolated:
      return "violated";
    case Outcome::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Verdict sequential_verify(const std::function<bool(std::size_t)>& trial, double p_req,
                          double c_req, std::size_t max_episodes) {
  if (max_episodes < 1) throw ConfigError("verification needs at least one episode");
  Verdict verdict;
  for (std::size_t k = 0; k < max_episodes; ++k) {
    verdict.posterior = update(verdict.posterior, trial(k));
    verdict.episodes_used = k + 1;
    verdict.c_sat = confidence_above(verdict.posterior, p_req);
    if (verdict.c_sat >= c_req) {
      verdict.outcome = Outcome::kSatisfied;
      return verdict;
    }
    if (1.0 - verdict.c_sat >= c_req) {
      verdict.outcome = Outcome::kViolated;
      return verdict;
    }
  }
  verdict.outcome = Outcome::kInconclusive;
  return verdict;
}

}  // namespace snes
