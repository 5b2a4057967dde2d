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

#include "snes/policy.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "snes/errors.hpp"

namespace snes {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

PolicyParams::PolicyParams(NetworkShape shape)
    : shape_(shape), values_(shape.parameter_count(), 0.0) {}

PolicyParams PolicyParams::unflatten(std::span<const double> flat, NetworkShape shape) {
  if (flat.size() != shape.parameter_count()) {
    throw ShapeError("parameter vector has " + std::to_string(flat.size()) +
                     " entries, shape expects " + std::to_string(shape.parameter_count()));
  }
  for (double v : flat) {
    if (!std::isfinite(v)) throw ShapeError("parameter vector contains a non-finite entry");
  }
  PolicyParams p(shape);
  p.values_.assign(flat.begin(), flat.end());
  return p;
}

PolicyParams PolicyParams::random(NetworkShape shape, Rng& rng, double stddev) {
  PolicyParams p(shape);
  std::normal_distribution<double> normal(0.0, stddev);
  for (double& v : p.values_) v = normal(rng);
  return p;
}

double PolicyParams::theta1(std::size_t row, std::size_t col) const {
  return values_.at(row * shape_.input_dim + col);
}

double PolicyParams::theta2(std::size_t row, std::size_t col) const {
  return values_.at(shape_.hidden_dim * shape_.input_dim + row * shape_.hidden_dim + col);
}

void PolicyParams::forward(std::span<const double> input, std::span<double> output) const {
  if (input.size() != shape_.input_dim || output.size() != shape_.output_dim) {
    throw ConfigError("policy expects input dimension " + std::to_string(shape_.input_dim) +
                      " and output dimension " + std::to_string(shape_.output_dim) + ", got " +
                      std::to_string(input.size()) + " and " + std::to_string(output.size()));
  }
  const auto in = static_cast<Eigen::Index>(shape_.input_dim);
  const auto hid = static_cast<Eigen::Index>(shape_.hidden_dim);
  const auto out = static_cast<Eigen::Index>(shape_.output_dim);

  Eigen::Map<const RowMatrix> w1(values_.data(), hid, in);
  Eigen::Map<const RowMatrix> w2(values_.data() + hid * in, out, hid);
  Eigen::Map<const Eigen::VectorXd> x(input.data(), in);
  Eigen::Map<Eigen::VectorXd> y(output.data(), out);

  Eigen::VectorXd hidden = ((w1 * x).array() + 1.0).cwiseMax(0.0).matrix();
  y = ((w2 * hidden).array() + 1.0).tanh().matrix();
}

std::vector<double> PolicyParams::forward(std::span<const double> input) const {
  std::vector<double> y(shape_.output_dim);
  forward(input, y);
  return y;
}

std::size_t decoder_arity(const ActionDecoder& decoder) {
  if (const auto* box = std::get_if<ContinuousBox>(&decoder)) return box->scale.size();
  return std::get<DiscreteArgmax>(decoder).count;
}

std::size_t argmax_index(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

DecodedAction decode_action(const ActionDecoder& decoder, std::span<const double> output) {
  if (decoder_arity(decoder) != output.size()) {
    throw ConfigError("decoder arity " + std::to_string(decoder_arity(decoder)) +
                      " does not match network output size " + std::to_string(output.size()));
  }
  if (const auto* box = std::get_if<ContinuousBox>(&decoder)) {
    std::vector<double> action(output.size());
    for (std::size_t i = 0; i < output.size(); ++i) action[i] = box->scale[i] * output[i];
    return action;
  }
  return argmax_index(output);
}

}  // namespace snes
