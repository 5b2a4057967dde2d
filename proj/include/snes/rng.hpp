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

#ifndef SNES_RNG_HPP
#define SNES_RNG_HPP

#include <cstdint>
#include <random>

namespace snes {

using Rng = std::mt19937_64;

/// Sub-stream tags. Every random consumer draws from its own stream derived
/// from the root seed, so reordering components never correlates them.
enum class Stream : std::uint64_t {
  kInit = 1,
  kPerturbation = 2,
  kEpisode = 3,
  kVerification = 4,
  kFinalVerification = 5,
  kReset = 6,
  kDynamics = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
  std::uint64_t h = mix64(root);
  h = mix64(h ^ static_cast<std::uint64_t>(stream));
  h = mix64(h ^ a);
  return mix64(h ^ b);
}

inline Rng make_rng(std::uint64_t root, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(derive_seed(root, stream, a, b));
}

}  // namespace snes

#endif  // SNES_RNG_HPP
