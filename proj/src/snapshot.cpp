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

#include "snes/snapshot.hpp"

#include <fstream>
#include <vector>

#include "snes/errors.hpp"
#include "snes/format.hpp"

namespace snes {

namespace {

constexpr const char* kMagic = "snes-policy v1";

std::size_t read_field(std::istream& in, const std::string& name) {
  std::string key;
  std::size_t value = 0;
  if (!(in >> key >> value) || key != name) {
    throw ShapeError("snapshot: expected field '" + name + "'");
  }
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const PolicyParams& policy) {
  const NetworkShape& s = policy.shape();
  out << kMagic << '\n';
  out << "input_dim " << s.input_dim << '\n';
  out << "hidden_dim " << s.hidden_dim << '\n';
  out << "output_dim " << s.output_dim << '\n';
  out << "count " << s.parameter_count() << '\n';
  for (double v : policy.flat()) out << format_double(v) << '\n';
}

PolicyParams read_snapshot(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw ShapeError("snapshot: missing '" + std::string(kMagic) + "' header");
  NetworkShape shape;
  shape.input_dim = read_field(in, "input_dim");
  shape.hidden_dim = read_field(in, "hidden_dim");
  shape.output_dim = read_field(in, "output_dim");
  const std::size_t count = read_field(in, "count");
  std::vector<double> values;
  values.reserve(count);
  std::string token;
  while (values.size() < count && in >> token) {
    try {
      values.push_back(parse_double(token));
    } catch (const SchemaError&) {
      throw ShapeError("snapshot: malformed parameter '" + token + "'");
    }
  }
  if (values.size() != count) throw ShapeError("snapshot: truncated parameter list");
  if (in >> token) throw ShapeError("snapshot: trailing data after parameters");
  return PolicyParams::unflatten(values, shape);
}

void save_snapshot(const std::string& path, const PolicyParams& policy) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write snapshot '" + path + "'");
  write_snapshot(out, policy);
}

PolicyParams load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  return read_snapshot(in);
}

}  // namespace snes
