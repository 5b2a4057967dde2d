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

#include "snes/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "snes/envs.hpp"
#include "snes/errors.hpp"
#include "snes/format.hpp"

namespace snes {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  return out;
}

}  // namespace

std::size_t ExperimentConfig::total_episodes() const {
  if (episodes) return *episodes;
  if (env == "obstacle_run") return 20000;
  if (env == "coin") return 1000;
  return 60000;
}

int ExperimentConfig::resolved_n_max() const {
  if (n_max) return *n_max;
  return env == "obstacle_run" ? 4 : 1;
}

pctl::Requirement ExperimentConfig::resolved_requirement() const {
  std::string text = requirement;
  if (text.empty()) {
    if (env == "particle_dance") {
      text = envs::ParticleDance::default_requirement();
    } else if (env == "obstacle_run") {
      text = envs::ObstacleRun::default_requirement();
    } else {
      text = envs::Coin::default_requirement();
    }
  }
  pctl::Requirement req = pctl::parse_requirement(text);
  return pctl::Requirement(req.path, p_req.value_or(req.p_req), c_req.value_or(req.c_req));
}

void ExperimentConfig::validate() const {
  if (env != "particle_dance" && env != "obstacle_run" && env != "coin") {
    throw ConfigError("unknown environment '" + env + "'");
  }
  es.validate();
  (void)Horizon(horizon);
  (void)resolved_requirement();
  if (total_episodes() == 0 || total_episodes() % es.population != 0) {
    throw ConfigError("episodes (" + std::to_string(total_episodes()) +
                      ") must be a positive multiple of the population size (" +
                      std::to_string(es.population) + ")");
  }
  if (verify_every == 0) throw ConfigError("verify_every must be positive");
  if (verify_cap == 0) throw ConfigError("verify_cap must be positive");
  if (repetitions == 0) throw ConfigError("reps must be positive");
  if (rolling_window == 0 || summary_window == 0) throw ConfigError("windows must be positive");
  if (resolved_n_max() < 0) throw ConfigError("nmax must be non-negative");
  if (!(d_min > 0.0)) throw ConfigError("dmin must be positive");
  if (distance != "euclidean" && distance != "chebyshev") {
    throw ConfigError("distance must be euclidean or chebyshev");
  }
  if (!(coin_p >= 0.0 && coin_p <= 1.0)) throw ConfigError("coin_p must lie in [0, 1]");
  if (hidden_dim == 0) throw ConfigError("hidden must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "env") {
    cfg.env = std::string(value);
  } else if (key == "requirement") {
    cfg.requirement = std::string(value);
  } else if (key == "preq") {
    cfg.p_req = parse_number<double>(key, value);
  } else if (key == "creq") {
    cfg.c_req = parse_number<double>(key, value);
  } else if (key == "horizon") {
    cfg.horizon = parse_number<int>(key, value);
  } else if (key == "pop") {
    cfg.es.population = parse_number<std::size_t>(key, value);
  } else if (key == "sigma") {
    cfg.es.sigma = parse_number<double>(key, value);
  } else if (key == "alpha") {
    cfg.es.alpha = parse_number<double>(key, value);
  } else if (key == "std") {
    if (value == "population") {
      cfg.es.std_estimator = StdEstimator::kPopulation;
    } else if (value == "sample") {
      cfg.es.std_estimator = StdEstimator::kSample;
    } else {
      throw ConfigError("std must be population or sample");
    }
  } else if (key == "mode") {
    cfg.mode = parse_lagrangian_mode(value);
  } else if (key == "mle_estimate") {
    if (value == "cumulative") {
      cfg.mle_estimate = MleEstimate::kCumulative;
    } else if (value == "generation") {
      cfg.mle_estimate = MleEstimate::kPerGeneration;
    } else {
      throw ConfigError("mle_estimate must be cumulative or generation");
    }
  } else if (key == "posterior_window") {
    cfg.posterior_window = parse_number<std::size_t>(key, value);
  } else if (key == "episodes") {
    cfg.episodes = parse_number<std::size_t>(key, value);
  } else if (key == "verify_every") {
    cfg.verify_every = parse_number<std::size_t>(key, value);
  } else if (key == "verify_cap") {
    cfg.verify_cap = parse_number<std::size_t>(key, value);
  } else if (key == "reps") {
    cfg.repetitions = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out_dir = std::string(value);
  } else if (key == "nmax") {
    cfg.n_max = parse_number<int>(key, value);
  } else if (key == "dmin") {
    cfg.d_min = parse_number<double>(key, value);
  } else if (key == "distance") {
    cfg.distance = std::string(value);
  } else if (key == "coin_p") {
    cfg.coin_p = parse_number<double>(key, value);
  } else if (key == "hidden") {
    cfg.hidden_dim = parse_number<std::size_t>(key, value);
  } else if (key == "init_std") {
    cfg.init_stddev = parse_number<double>(key, value);
  } else if (key == "rolling_window") {
    cfg.rolling_window = parse_number<std::size_t>(key, value);
  } else if (key == "summary_window") {
    cfg.summary_window = parse_number<std::size_t>(key, value);
  } else if (key == "jobs") {
    cfg.jobs = parse_number<std::size_t>(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_setting(cfg, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "env = " << cfg.env << '\n';
  out << "requirement = " << pctl::to_string(cfg.resolved_requirement()) << '\n';
  out << "horizon = " << cfg.horizon << '\n';
  out << "pop = " << cfg.es.population << '\n';
  out << "sigma = " << format_double(cfg.es.sigma) << '\n';
  out << "alpha = " << format_double(cfg.es.alpha) << '\n';
  out << "std = " << (cfg.es.std_estimator == StdEstimator::kPopulation ? "population" : "sample")
      << '\n';
  out << "mode = " << to_string(cfg.mode) << '\n';
  out << "mle_estimate = "
      << (cfg.mle_estimate == MleEstimate::kCumulative ? "cumulative" : "generation") << '\n';
  out << "posterior_window = " << cfg.posterior_window << '\n';
  out << "episodes = " << cfg.total_episodes() << '\n';
  out << "verify_every = " << cfg.verify_every << '\n';
  out << "verify_cap = " << cfg.verify_cap << '\n';
  out << "reps = " << cfg.repetitions << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "out = " << cfg.out_dir << '\n';
  out << "nmax = " << cfg.resolved_n_max() << '\n';
  out << "dmin = " << format_double(cfg.d_min) << '\n';
  out << "distance = " << cfg.distance << '\n';
  out << "coin_p = " << format_double(cfg.coin_p) << '\n';
  out << "hidden = " << cfg.hidden_dim << '\n';
  out << "init_std = " << format_double(cfg.init_stddev) << '\n';
  out << "rolling_window = " << cfg.rolling_window << '\n';
  out << "summary_window = " << cfg.summary_window << '\n';
  out << "jobs = " << cfg.jobs << '\n';
  return out.str();
}

}  // namespace snes
