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

#include "snes/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "snes/errors.hpp"
#include "snes/format.hpp"
#include "snes/labeling.hpp"
#include "snes/snapshot.hpp"
#include "snes/snes.hpp"
#include "snes/verify.hpp"

namespace snes {

namespace {

struct WindowStats {
  double sat_prop = 0.0;
  std::optional<double> return_sat, return_viol, cost_sat, cost_viol;
};

WindowStats window_stats(const std::vector<EpisodeRecord>& episodes, std::size_t window) {
  const std::size_t n = std::min(window, episodes.size());
  WindowStats out;
  if (n == 0) return out;
  double rs = 0.0, rv = 0.0, cs = 0.0, cv = 0.0;
  std::size_t ns = 0;
  for (std::size_t i = episodes.size() - n; i < episodes.size(); ++i) {
    const EpisodeRecord& e = episodes[i];
    if (e.satisfied) {
      ++ns;
      rs += e.episode_return;
      cs += e.cost;
    } else {
      rv += e.episode_return;
      cv += e.cost;
    }
  }
  const std::size_t nv = n - ns;
  out.sat_prop = static_cast<double>(ns) / static_cast<double>(n);
  if (ns > 0) {
    out.return_sat = rs / static_cast<double>(ns);
    out.cost_sat = cs / static_cast<double>(ns);
  }
  if (nv > 0) {
    out.return_viol = rv / static_cast<double>(nv);
    out.cost_viol = cv / static_cast<double>(nv);
  }
  return out;
}

template <Environment E>
RepetitionResult train(const E& env, const ExperimentConfig& cfg, std::size_t repetition,
                       const ProgressFn& progress) {
  using State = typename E::State;
  const pctl::Requirement req = cfg.resolved_requirement();
  const pctl::Labeling<State> lab = env.labeling();
  const pctl::PathEvaluator<State> evaluator(req.path, lab);
  const Horizon horizon(cfg.horizon);
  const std::uint64_t root = repetition_seed(cfg.seed, repetition);
  const NetworkShape shape = policy_shape(env, cfg.hidden_dim);

  Rng init_rng = make_rng(root, Stream::kInit);
  SnesState state(PolicyParams::random(shape, init_rng, cfg.init_stddev).flatten());
  const SnesConfig snes_cfg{cfg.es, cfg.mode, cfg.mle_estimate, cfg.posterior_window};

  RepetitionResult result;
  result.repetition = repetition;
  const std::size_t total = cfg.total_episodes();
  const std::size_t population = cfg.es.population;
  const std::size_t generations = total / population;
  result.episodes.reserve(total);
  result.rows.reserve(generations);

  std::size_t checkpoint = 0;
  for (std::size_t g = 0; g < generations; ++g) {
    Rng rng = make_rng(root, Stream::kPerturbation, g);
    const OffspringEvaluator evaluate = [&](std::span<const double> params, std::size_t i) {
      const PolicyParams policy = PolicyParams::unflatten(params, shape);
      const auto episode = rollout(env, policy, horizon, derive_seed(root, Stream::kEpisode, g, i));
      return OffspringResult{episode_return(episode), evaluator.cumulative_cost(episode)};
    };
    const GenerationReport report = snes_generation(state, snes_cfg, req, evaluate, rng);

    for (const OffspringResult& o : report.offspring) {
      result.episodes.push_back({o.episode_return, o.cost, o.satisfied()});
    }
    const std::size_t done = (g + 1) * population;
    const WindowStats window = window_stats(result.episodes, cfg.rolling_window);

    MetricsRow row;
    row.repetition = repetition;
    row.generation = report.generation;
    row.episodes = done;
    row.mean_return = report.mean_return;
    row.mean_cost = report.mean_cost;
    row.sat_gen = report.satisfied;
    row.sat_prop = window.sat_prop;
    row.return_sat = window.return_sat;
    row.return_viol = window.return_viol;
    row.cost_sat = window.cost_sat;
    row.cost_viol = window.cost_viol;
    row.s = report.posterior.satisfied();
    row.v = report.posterior.violated();
    row.c_sat = report.c_sat;
    row.lambda = report.lambda;

    if (done / cfg.verify_every > (done - population) / cfg.verify_every) {
      PolicyParams snapshot = PolicyParams::unflatten(state.theta, shape);
      row.verification = bayesian_verify(env, snapshot, req, lab, horizon, cfg.verify_cap,
                                         derive_seed(root, Stream::kVerification, checkpoint));
      result.checkpoints.push_back(std::move(snapshot));
      ++checkpoint;
    }
    if (progress) progress(repetition, row);
    result.rows.push_back(std::move(row));
  }

  result.policy = PolicyParams::unflatten(state.theta, shape);
  result.final_verdict = bayesian_verify(env, result.policy, req, lab, horizon, cfg.verify_cap,
                                         derive_seed(root, Stream::kFinalVerification));
  return result;
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_double(*v);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

/// Per-row numeric values of the aggregated metrics, in metric_columns order.
std::vector<std::optional<double>> row_values(const MetricsRow& r) {
  std::optional<double> verify_c_sat, verify_episodes, verify_satisfied;
  if (r.verification) {
    verify_c_sat = r.verification->c_sat;
    verify_episodes = static_cast<double>(r.verification->episodes_used);
    verify_satisfied = r.verification->outcome == Outcome::kSatisfied ? 1.0 : 0.0;
  }
  return {r.mean_return,
          r.mean_cost,
          static_cast<double>(r.sat_gen),
          r.sat_prop,
          r.return_sat,
          r.return_viol,
          r.cost_sat,
          r.cost_viol,
          static_cast<double>(r.s),
          static_cast<double>(r.v),
          r.c_sat,
          r.lambda,
          verify_c_sat,
          verify_episodes,
          verify_satisfied};
}

}  // namespace

AnyEnvironment make_environment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.env == "particle_dance") {
    envs::ParticleDanceConfig pd;
    pd.d_min = cfg.d_min;
    pd.n_max = cfg.resolved_n_max();
    pd.metric = cfg.distance == "chebyshev" ? envs::DistanceMetric::kChebyshev
                                            : envs::DistanceMetric::kEuclidean;
    return envs::ParticleDance(pd);
  }
  if (cfg.env == "obstacle_run") return envs::ObstacleRun(envs::ObstacleRunConfig{cfg.resolved_n_max()});
  return envs::Coin(cfg.coin_p);
}

std::uint64_t repetition_seed(std::uint64_t root, std::size_t repetition) {
  return mix64(mix64(root) ^ (0x5eedULL + repetition));
}

RepetitionResult run_repetition(const ExperimentConfig& cfg, std::size_t repetition,
                                const ProgressFn& progress) {
  const AnyEnvironment env = make_environment(cfg);
  return std::visit([&](const auto& e) { return train(e, cfg, repetition, progress); }, env);
}

ExperimentResult run_repetitions(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  ExperimentResult result;
  result.repetitions.resize(cfg.repetitions);
  for (std::size_t first = 0; first < cfg.repetitions; first += cfg.jobs) {
    const std::size_t last = std::min(cfg.repetitions, first + cfg.jobs);
    if (last - first == 1) {
      result.repetitions[first] = run_repetition(cfg, first, progress);
      continue;
    }
    std::vector<std::future<RepetitionResult>> batch;
    for (std::size_t r = first; r < last; ++r) {
      batch.push_back(std::async(std::launch::async,
                                 [&cfg, r] { return run_repetition(cfg, r, ProgressFn{}); }));
    }
    for (std::size_t r = first; r < last; ++r) result.repetitions[r] = batch[r - first].get();
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");
  }
  open_output(dir / "config.txt") << to_config_text(cfg);

  ExperimentResult result = run_repetitions(cfg, progress);
  for (const RepetitionResult& rep : result.repetitions) {
    const std::string tag = "rep" + std::to_string(rep.repetition);
    auto metrics = open_output(dir / ("metrics_" + tag + ".csv"));
    write_metrics_csv(metrics, rep.rows);
    auto policy = open_output(dir / ("policy_" + tag + ".txt"));
    write_snapshot(policy, rep.policy);
    std::size_t k = 0;
    for (const MetricsRow& row : rep.rows) {
      if (!row.verification) continue;
      auto snap = open_output(dir / ("policy_" + tag + "_ep" + std::to_string(row.episodes) + ".txt"));
      write_snapshot(snap, rep.checkpoints.at(k++));
    }
  }
  auto aggregate = open_output(dir / "metrics_aggregate.csv");
  write_aggregate_csv(aggregate, result.repetitions);
  auto summary = open_output(dir / "summary.csv");
  write_summary_csv(summary, result.repetitions, cfg.summary_window);
  return result;
}

Verdict verify_policy(const ExperimentConfig& cfg, const PolicyParams& policy, std::size_t cap,
                      std::uint64_t seed) {
  const AnyEnvironment env = make_environment(cfg);
  const pctl::Requirement req = cfg.resolved_requirement();
  const Horizon horizon(cfg.horizon);
  return std::visit(
      [&](const auto& e) {
        return bayesian_verify(e, policy, req, e.labeling(), horizon, cap, seed);
      },
      env);
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> columns = {
      "mean_return", "mean_cost", "sat_gen", "sat_prop",     "return_sat",      "return_viol",
      "cost_sat",    "cost_viol", "s",       "v",            "c_sat",           "lambda",
      "verify_c_sat", "verify_episodes", "verify_satisfied"};
  return columns;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsSchema << '\n';
  out << "repetition,generation,episodes,mean_return,mean_cost,sat_gen,sat_prop,return_sat,"
         "return_viol,cost_sat,cost_viol,s,v,c_sat,lambda,verify_outcome,verify_c_sat,"
         "verify_episodes\n";
  for (const MetricsRow& r : rows) {
    out << r.repetition << ',' << r.generation << ',' << r.episodes << ','
        << format_double(r.mean_return) << ',' << format_double(r.mean_cost) << ',' << r.sat_gen
        << ',' << format_double(r.sat_prop) << ',';
    write_optional(out, r.return_sat);
    out << ',';
    write_optional(out, r.return_viol);
    out << ',';
    write_optional(out, r.cost_sat);
    out << ',';
    write_optional(out, r.cost_viol);
    out << ',' << r.s << ',' << r.v << ',' << format_double(r.c_sat) << ','
        << format_double(r.lambda) << ',';
    if (r.verification) {
      out << to_string(r.verification->outcome) << ',' << format_double(r.verification->c_sat)
          << ',' << r.verification->episodes_used;
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<RepetitionResult>& reps) {
  out << kAggregateSchema << '\n';
  out << "generation,episodes,repetitions";
  for (const std::string& c : metric_columns()) out << ',' << c << "_mean," << c << "_std";
  out << '\n';
  if (reps.empty()) return;
  const std::size_t rows = reps.front().rows.size();
  for (const RepetitionResult& rep : reps) {
    if (rep.rows.size() != rows) throw SchemaError("repetitions have different lengths");
  }
  const std::size_t metrics = metric_columns().size();
  for (std::size_t i = 0; i < rows; ++i) {
    const MetricsRow& head = reps.front().rows[i];
    out << head.generation << ',' << head.episodes << ',' << reps.size();
    std::vector<std::vector<double>> samples(metrics);
    for (const RepetitionResult& rep : reps) {
      const auto values = row_values(rep.rows[i]);
      for (std::size_t m = 0; m < metrics; ++m) {
        if (values[m]) samples[m].push_back(*values[m]);
      }
    }
    for (const std::vector<double>& xs : samples) {
      out << ',';
      if (xs.empty()) {
        out << ',';
        continue;
      }
      double sum = 0.0;
      for (double x : xs) sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      double sq = 0.0;
      for (double x : xs) sq += (x - mean) * (x - mean);
      out << format_double(mean) << ','
          << format_double(std::sqrt(sq / static_cast<double>(xs.size())));
    }
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<RepetitionResult>& reps,
                       std::size_t window) {
  out << kSummarySchema << '\n';
  out << "repetition,episodes,window,sat_prop,mean_return,return_sat,return_viol,"
         "verify_outcome,verify_c_sat,verify_episodes,verify_s,verify_v\n";
  for (const RepetitionResult& rep : reps) {
    const std::size_t n = std::min(window, rep.episodes.size());
    double sum = 0.0;
    for (std::size_t i = rep.episodes.size() - n; i < rep.episodes.size(); ++i) {
      sum += rep.episodes[i].episode_return;
    }
    const Verdict& v = rep.final_verdict;
    out << rep.repetition << ',' << rep.episodes.size() << ',' << n << ','
        << format_double(tail_satisfying_proportion(rep.episodes, window)) << ','
        << format_double(n > 0 ? sum / static_cast<double>(n) : 0.0) << ',';
    write_optional(out, tail_mean_return(rep.episodes, window, true));
    out << ',';
    write_optional(out, tail_mean_return(rep.episodes, window, false));
    out << ',' << to_string(v.outcome) << ',' << format_double(v.c_sat) << ','
        << v.episodes_used << ',' << v.posterior.satisfied() << ',' << v.posterior.violated()
        << '\n';
  }
}

double tail_satisfying_proportion(const std::vector<EpisodeRecord>& episodes, std::size_t window) {
  return window_stats(episodes, window).sat_prop;
}

std::optional<double> tail_mean_return(const std::vector<EpisodeRecord>& episodes,
                                       std::size_t window, bool satisfied) {
  const WindowStats w = window_stats(episodes, window);
  return satisfied ? w.return_sat : w.return_viol;
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("SNES_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return cfg.out_dir;
}

}  // namespace snes
