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

// Monte-Carlo propagation of design tolerances through the perturbed closure
// solver, compared with the linear prediction of J and J_thth.

#ifndef PKMSENS_MONTE_CARLO_HPP_
#define PKMSENS_MONTE_CARLO_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/geometry.hpp"

namespace pkmsens {

enum class Distribution { kNormal, kUniform };

std::string_view to_string(Distribution d);

// Per-parameter scale: standard deviation for normal, half-width for uniform.
//
// JSON form: {"distribution": "normal" | "uniform", "<name>": v, ...} where
// <name> is a full parameter name ("dL", "de_x", ..., "g_y") applying to all
// legs, or "<name>_<leg>" (e.g. "thA_y_2") for one leg. Leg-specific entries
// override the all-legs value. Units are mm and rad.
struct ToleranceSpec {
  Distribution distribution = Distribution::kNormal;
  FullParamVector scale = FullParamVector::Zero();

  // Throws ConfigError on malformed documents, unknown keys or negative values.
  static ToleranceSpec from_json(const nlohmann::json& doc);
  static ToleranceSpec parse(std::string_view text);

  // Same scale on every length parameter and every angle parameter.
  static ToleranceSpec uniform_scale(Distribution distribution, double length,
                                     double angle);
};

// Draws sample k of the stream for `seed`: one variate per parameter in
// FullParamVector order, drawn even when its scale is zero.
FullParamVector sample_parameters(const ToleranceSpec& spec, std::uint64_t seed,
                                  std::uint64_t k);

struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  double max = 0.0;
};

struct MonteCarloReport {
  Vec3 point = Vec3::Zero();
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::kNormal;
  std::size_t requested = 0;
  std::size_t accepted = 0;
  std::size_t skipped = 0;  // NoConvergence or out-of-range samples
  ErrorStats sampled_dp;        // ||dp|| from the closure solver, mm
  ErrorStats sampled_dtheta;    // ||dtheta|| from the closure solver, rad
  ErrorStats predicted_dp;      // ||J eps||
  ErrorStats predicted_dtheta;  // ||J_thth eps_theta||
};

// Deterministic for a given seed, independent of `threads` (0 = hardware
// concurrency). Pose errors are measured relative to the solve with zero
// inputs. Requires n >= 1 (std::invalid_argument).
MonteCarloReport monte_carlo(const Vec3& p, const MachineParams& params,
                             const ToleranceSpec& spec, std::size_t n,
                             std::uint64_t seed, unsigned threads = 1);

nlohmann::json to_json(const MonteCarloReport& report);

}  // namespace pkmsens

#endif  // PKMSENS_MONTE_CARLO_HPP_
