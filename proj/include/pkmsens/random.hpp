// Copyright 2026 The pkmsens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random streams with a documented, platform-independent mapping.
//
// Stream k of seed s is std::mt19937_64 seeded with
// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15). Uniform variates use the top
// 53 bits of one engine output; standard normals use one Box-Muller pair per
// variate (cosine branch). std::*_distribution is avoided because its output
// differs between standard library implementations.

#ifndef PKMSENS_RANDOM_HPP_
#define PKMSENS_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pkmsens {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t k) {
  return std::mt19937_64(splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15ULL));
}

// Uniform on [0, 1).
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Uniform on [-half_width, half_width).
inline double uniform_symmetric(std::mt19937_64& engine, double half_width) {
  return half_width * (2.0 * uniform01(engine) - 1.0);
}

inline double standard_normal(std::mt19937_64& engine) {
  const double u1 = 1.0 - uniform01(engine);  // (0, 1]
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace pkmsens

#endif  // PKMSENS_RANDOM_HPP_
