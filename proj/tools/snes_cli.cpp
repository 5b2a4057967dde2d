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

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "snes/bayes.hpp"
#include "snes/config.hpp"
#include "snes/envs.hpp"
#include "snes/errors.hpp"
#include "snes/es.hpp"
#include "snes/format.hpp"
#include "snes/harness.hpp"
#include "snes/labeling.hpp"
#include "snes/pctl.hpp"
#include "snes/plot.hpp"
#include "snes/snapshot.hpp"
#include "snes/snes.hpp"

namespace {

using snes::ExperimentConfig;

struct Overrides {
  std::string config_file;
  std::vector<std::string> settings;  // key=value
  std::string env, mode, out, requirement;
  std::optional<int> nmax, horizon;
  std::optional<double> preq, creq, alpha, sigma, dmin, coin_p;
  std::optional<std::size_t> pop, episodes, reps;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app, bool training) {
    app->add_option("--config", config_file, "key = value configuration file");
    app->add_option("--set", settings, "extra key=value setting (repeatable)");
    app->add_option("--env", env, "particle_dance | obstacle_run | coin");
    app->add_option("--nmax", nmax, "collision budget n_max");
    app->add_option("--dmin", dmin, "particle dance exclusion radius");
    app->add_option("--coin-p", coin_p, "coin environment safety probability");
    app->add_option("--requirement", requirement, "requirement text");
    app->add_option("--preq", preq, "required satisfaction probability");
    app->add_option("--creq", creq, "required confidence");
    app->add_option("--horizon", horizon, "episode length bound");
    if (!training) return;
    app->add_option("--alpha", alpha, "learning rate");
    app->add_option("--sigma", sigma, "perturbation scale");
    app->add_option("--pop", pop, "population size");
    app->add_option("--episodes", episodes, "training episodes per repetition");
    app->add_option("--mode", mode, "bayesian | mle | unconstrained");
    app->add_option("--seed", seed, "root seed");
    app->add_option("--reps", reps, "repetitions");
    app->add_option("--out", out, "output directory (SNES_OUTPUT_DIR overrides)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config_file.empty() ? ExperimentConfig{} : snes::load_config_file(config_file);
    for (const std::string& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw snes::ConfigError("--set expects key=value, got '" + kv + "'");
      snes::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!env.empty()) cfg.env = env;
    if (!mode.empty()) cfg.mode = snes::parse_lagrangian_mode(mode);
    if (!out.empty()) cfg.out_dir = out;
    if (!requirement.empty()) cfg.requirement = requirement;
    if (nmax) cfg.n_max = *nmax;
    if (horizon) cfg.horizon = *horizon;
    if (preq) cfg.p_req = *preq;
    if (creq) cfg.c_req = *creq;
    if (alpha) cfg.es.alpha = *alpha;
    if (sigma) cfg.es.sigma = *sigma;
    if (dmin) cfg.d_min = *dmin;
    if (coin_p) cfg.coin_p = *coin_p;
    if (pop) cfg.es.population = *pop;
    if (episodes) cfg.episodes = *episodes;
    if (reps) cfg.repetitions = *reps;
    if (seed) cfg.seed = *seed;
    cfg.out_dir = snes::resolve_output_dir(cfg);
    cfg.validate();
    return cfg;
  }
};

int run_train(const Overrides& o, bool quiet) {
  const ExperimentConfig cfg = o.resolve();
  std::cerr << "training " << cfg.env << " (" << snes::to_string(cfg.mode) << ") for "
            << cfg.total_episodes() << " episodes x " << cfg.repetitions << " repetitions -> "
            << cfg.out_dir << '\n';
  snes::ProgressFn progress;
  if (!quiet) {
    progress = [](std::size_t rep, const snes::MetricsRow& row) {
      if (!row.verification) return;
      std::fprintf(stderr,
                   "rep %zu  episodes %7zu  return %9.3f  sat %.3f  c_sat %.4f  lambda %.3f  "
                   "verify %s (%.4f, %zu)\n",
                   rep, row.episodes, row.mean_return, row.sat_prop, row.c_sat, row.lambda,
                   std::string(snes::to_string(row.verification->outcome)).c_str(),
                   row.verification->c_sat, row.verification->episodes_used);
    };
  }
  const auto result = snes::run_experiment(cfg, progress);
  for (const auto& rep : result.repetitions) {
    std::printf("rep %zu: final verification %s, c_sat %s, %zu episodes\n", rep.repetition,
                std::string(snes::to_string(rep.final_verdict.outcome)).c_str(),
                snes::format_double(rep.final_verdict.c_sat).c_str(),
                rep.final_verdict.episodes_used);
  }
  return 0;
}

int run_verify(const Overrides& o, const std::string& snapshot, std::size_t cap, std::uint64_t seed) {
  const ExperimentConfig cfg = o.resolve();
  const snes::PolicyParams policy = snes::load_snapshot(snapshot);
  const snes::Verdict v = snes::verify_policy(cfg, policy, cap, seed);
  std::printf("requirement: %s\n", snes::pctl::to_string(cfg.resolved_requirement()).c_str());
  std::printf("verdict: %s\n", std::string(snes::to_string(v.outcome)).c_str());
  std::printf("c_sat: %s\n", snes::format_double(v.c_sat).c_str());
  std::printf("episodes: %zu\n", v.episodes_used);
  std::printf("satisfied: %llu\nviolated: %llu\n",
              static_cast<unsigned long long>(v.posterior.satisfied()),
              static_cast<unsigned long long>(v.posterior.violated()));
  return 0;
}

// Quick numerical checks of the installed build; each prints one line.
int run_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  report("beta_cdf closed forms",
         std::abs(snes::beta_cdf(0.85, 2, 1) - 0.7225) < 1e-12 &&
             std::abs(snes::beta_cdf(0.5, 5, 1) - 0.03125) < 1e-12 &&
             std::abs(snes::beta_cdf(0.5, 1, 1) - 0.5) < 1e-12);
  report("confidence after one success",
         std::abs(snes::confidence_above(snes::BetaPosterior(1, 0), 0.85) - 0.2775) < 1e-12);
  report("lambda tables", std::abs(snes::lambda_confidence(0.99, 0.98) - 0.5) < 1e-12 &&
                              std::abs(snes::lambda_mle(19, 20, 0.9) - 0.5) < 1e-12);
  const auto z = snes::normalize(std::vector<double>{1, 2, 3});
  report("normalize", std::abs(z[2] - std::sqrt(1.5)) < 1e-12 && z[1] == 0.0);
  const snes::PolicyParams zero(snes::NetworkShape{8, 32, 2});
  report("zero-weight network outputs tanh(1)",
         zero.forward(std::vector<double>(8, 0.3))[0] == std::tanh(1.0));
  bool round_trip = true;
  for (const std::string& text : {snes::envs::ParticleDance::default_requirement(),
                                  snes::envs::ObstacleRun::default_requirement()}) {
    round_trip = round_trip && snes::pctl::to_string(snes::pctl::parse_requirement(text)) == text;
  }
  report("requirement round-trip", round_trip);
  ExperimentConfig coin;
  coin.env = "coin";
  const auto verdict = snes::verify_policy(coin, snes::PolicyParams(snes::NetworkShape{1, 32, 1}), 100, 1);
  report("verifier on an always-safe environment",
         verdict.outcome == snes::Outcome::kSatisfied && verdict.episodes_used == 3);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy synthesis under probabilistic constraints"};
  app.require_subcommand(1);

  Overrides train_opts;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "train policies and write metrics CSVs");
  train_opts.attach(train, true);
  train->add_flag("--quiet", quiet, "suppress checkpoint progress");

  Overrides verify_opts;
  std::string snapshot;
  std::size_t cap = 1000;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "Bayesian verification of a policy snapshot");
  verify_opts.attach(verify, false);
  verify->add_option("--snapshot", snapshot, "policy snapshot file")->required();
  verify->add_option("--cap", cap, "maximum verification episodes");
  verify->add_option("--seed", verify_seed, "verification seed");

  std::vector<std::string> inputs;
  std::string plot_dir = "plots";
  auto* plot = app.add_subcommand("plot", "render SVG charts from metrics CSVs");
  plot->add_option("inputs", inputs, "aggregate or per-repetition metrics CSVs")->required();
  plot->add_option("--out", plot_dir, "output directory");

  auto* selftest = app.add_subcommand("selftest", "run built-in numerical checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return run_train(train_opts, quiet);
    if (*verify) return run_verify(verify_opts, snapshot, cap, verify_seed);
    if (*plot) {
      for (const auto& f : snes::emit_plots(inputs, plot_dir)) std::printf("%s\n", f.c_str());
      return 0;
    }
    if (*selftest) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
