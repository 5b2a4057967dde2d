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

#ifndef SNES_ERRORS_HPP
#define SNES_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snes {

/// Invalid configuration: mismatched dimensions, bad hyperparameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat parameter vector does not match a network shape.
class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Formula refers to an unknown atom or is undefined on the given episode.
class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requirement text does not follow the grammar.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Probability or confidence bound outside (0, 1).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A fitness evaluation produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metrics file is missing, empty, or lacks required columns.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace snes

#endif  // SNES_ERRORS_HPP
