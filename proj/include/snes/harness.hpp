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

#ifndef SNES_HARNESS_HPP
#define SNES_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "snes/bayes.hpp"
#include "snes/config.hpp"
#include "snes/envs.hpp"
#include "snes/policy.hpp"

namespace snes {

using AnyEnvironment = std::variant<envs::ParticleDance, envs::ObstacleRun, envs::Coin>;

/// Builds the environment named by cfg.env with its n_max/d_min/coin_p settings.
AnyEnvironment make_environment(const ExperimentConfig& cfg);

struct EpisodeRecord {
  double episode_return = 0.0;
  double cost = 0.0;
  bool satisfied = false;
};

/// One line of the per-repetition metrics table. Windowed fields cover the
/// last rolling_window training episodes; a split field with no episodes on
/// its side of the window is empty.
struct MetricsRow {
  std::size_t repetition = 0;
  std::size_t generation = 0;
  std::size_t episodes = 0;
  double mean_return = 0.0;
  double mean_cost = 0.0;
  std::uint64_t sat_gen = 0;
  double sat_prop = 0.0;
  std::optional<double> return_sat;
  std::optional<double> return_viol;
  std::optional<double> cost_sat;
  std::optional<double> cost_viol;
  std::uint64_t s = 0;
  std::uint64_t v = 0;
  double c_sat = 0.0;
  double lambda = 0.0;
  std::optional<Verdict> verification;
};

struct RepetitionResult {
  std::size_t repetition = 0;
  std::vector<MetricsRow> rows;
  std::vector<EpisodeRecord> episodes;
  std::vector<PolicyParams> checkpoints;  // theta at each verification row
  PolicyParams policy;
  Verdict final_verdict;
};

struct ExperimentResult {
  std::vector<RepetitionResult> repetitions;
};

using ProgressFn = std::function<void(std::size_t repetition, const MetricsRow& row)>;

/// Root seed of repetition r; streams inside a repetition derive from it.
std::uint64_t repetition_seed(std::uint64_t root, std::size_t repetition);

/// Trains one repetition in memory, verifying every verify_every episodes
/// and once more after the last generation.
RepetitionResult run_repetition(const ExperimentConfig& cfg, std::size_t repetition,
                                const ProgressFn& progress = {});

/// Runs every repetition (cfg.jobs at a time) without touching the disk.
ExperimentResult run_repetitions(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Runs all repetitions and writes into cfg.out_dir:
///   config.txt, metrics_rep<r>.csv, metrics_aggregate.csv, summary.csv,
///   policy_rep<r>.txt and policy_rep<r>_ep<episodes>.txt per checkpoint.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Bayesian verification of a frozen policy in the configured environment.
Verdict verify_policy(const ExperimentConfig& cfg, const PolicyParams& policy,
                      std::size_t cap, std::uint64_t seed);

inline constexpr const char* kMetricsSchema = "# schema: snes-metrics v1";
inline constexpr const char* kAggregateSchema = "# schema: snes-aggregate v1";
inline constexpr const char* kSummarySchema = "# schema: snes-summary v1";

/// Column names shared by the metrics and aggregate tables.
const std::vector<std::string>& metric_columns();

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

/// Mean and population standard deviation across repetitions, per row index.
/// Optional columns are averaged over the repetitions where present.
void write_aggregate_csv(std::ostream& out, const std::vector<RepetitionResult>& reps);

void write_summary_csv(std::ostream& out, const std::vector<RepetitionResult>& reps,
                       std::size_t window);

/// Fraction of satisfying episodes among the last `window` records.
double tail_satisfying_proportion(const std::vector<EpisodeRecord>& episodes, std::size_t window);

/// Mean return over the satisfying (or violating) episodes among the last
/// `window` records; nullopt when there are none.
std::optional<double> tail_mean_return(const std::vector<EpisodeRecord>& episodes,
                                       std::size_t window, bool satisfied);

/// Output directory after applying the SNES_OUTPUT_DIR override.
std::string resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace snes

#endif  // SNES_HARNESS_HPP
