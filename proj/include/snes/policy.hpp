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

#ifndef SNES_POLICY_HPP
#define SNES_POLICY_HPP

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "snes/rng.hpp"

namespace snes {

struct NetworkShape {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 32;
  std::size_t output_dim = 0;

  std::size_t parameter_count() const { return hidden_dim * input_dim + output_dim * hidden_dim; }
  bool operator==(const NetworkShape&) const = default;
};

/// Weights of the two-layer network y = tanh(W2 relu(W1 x + 1) + 1).
///
/// The "+1" terms are constant bias vectors of ones and are not parameters.
/// Storage is a single flat vector: W1 row-major (hidden x input) followed by
/// W2 row-major (output x hidden). This is also the ES search space.
class PolicyParams {
 public:
  PolicyParams() = default;
  explicit PolicyParams(NetworkShape shape);

  /// Throws ShapeError when `flat.size() != shape.parameter_count()` or any
  /// entry is non-finite.
  static PolicyParams unflatten(std::span<const double> flat, NetworkShape shape);

  /// Entries drawn i.i.d. from Normal(0, stddev).
  static PolicyParams random(NetworkShape shape, Rng& rng, double stddev = 0.1);

  const NetworkShape& shape() const { return shape_; }
  std::span<const double> flat() const { return values_; }
  std::vector<double> flatten() const { return values_; }

  double theta1(std::size_t row, std::size_t col) const;
  double theta2(std::size_t row, std::size_t col) const;

  /// Throws ConfigError on input/output size mismatch.
  void forward(std::span<const double> input, std::span<double> output) const;
  std::vector<double> forward(std::span<const double> input) const;

  bool operator==(const PolicyParams&) const = default;

 private:
  NetworkShape shape_;
  std::vector<double> values_;
};

struct ContinuousBox {
  std::vector<double> scale;
};

struct DiscreteArgmax {
  std::size_t count = 0;
};

using ActionDecoder = std::variant<ContinuousBox, DiscreteArgmax>;

/// Continuous actions are scaled vectors; discrete actions are indices.
using DecodedAction = std::variant<std::vector<double>, std::size_t>;

std::size_t decoder_arity(const ActionDecoder& decoder);

/// Maps network outputs to an action. Argmax ties resolve to the lowest index;
/// continuous outputs are multiplied componentwise by the box half-widths.
DecodedAction decode_action(const ActionDecoder& decoder, std::span<const double> output);

std::size_t argmax_index(std::span<const double> values);

}  // namespace snes

#endif  // SNES_POLICY_HPP
