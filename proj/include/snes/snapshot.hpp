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

#ifndef SNES_SNAPSHOT_HPP
#define SNES_SNAPSHOT_HPP

#include <istream>
#include <ostream>
#include <string>

#include "snes/policy.hpp"

namespace snes {

/// Text layout:
///   snes-policy v1
///   input_dim <n>
///   hidden_dim <n>
///   output_dim <n>
///   count <n>
///   <count lines, one parameter each, shortest round-trip decimal>
/// Parameters follow the flat order of PolicyParams.
void write_snapshot(std::ostream& out, const PolicyParams& policy);
PolicyParams read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const PolicyParams& policy);
PolicyParams load_snapshot(const std::string& path);

}  // namespace snes

#endif  // SNES_SNAPSHOT_HPP
