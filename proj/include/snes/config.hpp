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

#ifndef SNES_CONFIG_HPP
#define SNES_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>

#include "snes/es.hpp"
#include "snes/pctl.hpp"
#include "snes/snes.hpp"

namespace snes {

/// Declarative description of a training experiment.
///
/// Files are `key = value` lines; `#` starts a comment. Every key can also be
/// set from the command line. Unset optional fields fall back to the
/// environment's benchmark defaults.
struct ExperimentConfig {
  std::string env = "particle_dance";  // particle_dance | obstacle_run | coin
  std::string requirement;             // empty: environment default
  std::optional<double> p_req;         // overrides the requirement's bound
  std::optional<double> c_req;
  int horizon = 50;
  ESConfig es;
  LagrangianMode mode = LagrangianMode::kBayesian;
  MleEstimate mle_estimate = MleEstimate::kCumulative;
  std::size_t posterior_window = 0;
  std::optional<std::size_t> episodes;  // particle_dance 60000, obstacle_run 20000, coin 1000
  std::size_t verify_every = 1000;
  std::size_t verify_cap = 1000;
  std::size_t repetitions = 5;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/default";
  std::optional<int> n_max;  // particle_dance 1, obstacle_run 4
  double d_min = 0.1;
  std::string distance = "euclidean";
  double coin_p = 1.0;
  std::size_t hidden_dim = 32;
  double init_stddev = 0.1;
  std::size_t rolling_window = 100;
  std::size_t summary_window = 1000;
  std::size_t jobs = 1;

  std::size_t total_episodes() const;
  int resolved_n_max() const;
  pctl::Requirement resolved_requirement() const;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Sets one field from its textual form. Throws ConfigError for unknown keys
/// or unparsable values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical `key = value` rendering; parse_config reads it back unchanged.
std::string to_config_text(const ExperimentConfig& cfg);

}  // namespace snes

#endif  // SNES_CONFIG_HPP
