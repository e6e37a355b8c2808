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

// Comparison of the analytic sensitivity matrices against the finite-difference
// oracles over a seeded set of workspace points.

#ifndef PKMSENS_VALIDATION_HPP_
#define PKMSENS_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pkmsens/geometry.hpp"

namespace pkmsens {

inline constexpr std::uint64_t kDefaultSeed = 20260101;
inline constexpr int kDefaultValidationPoints = 10;
inline constexpr double kLinkageTolerance = 1e-6;
inline constexpr double kDiffVecTolerance = 1e-5;
// Entries below this magnitude are compared on an absolute scale.
inline constexpr double kRelativeFloor = 1e-3;

// {0, Q1, Q2} followed by n seeded points drawn uniformly from the cube shrunk
// to 90% of its edge about its centre.
std::vector<Vec3> validation_points(const MachineParams& params,
                                    std::uint64_t seed, int n);

// max over entries of |an - fd| / max(|fd|, floor).
double entrywise_relative_error(const Eigen::MatrixXd& analytic,
                                const Eigen::MatrixXd& oracle,
                                double floor = kRelativeFloor);

// max over columns of max|an - fd| / max(max|an|, floor).
double columnwise_relative_error(const Eigen::MatrixXd& analytic,
                                 const Eigen::MatrixXd& oracle,
                                 double floor = kRelativeFloor);

struct ValidationOptions {
  std::uint64_t seed = kDefaultSeed;
  int random_points = kDefaultValidationPoints;
  double h_length = 1e-6;
  double h_angle = 1e-8;
  unsigned threads = 1;
};

struct PointValidation {
  Vec3 point = Vec3::Zero();
  double C = 0.0;
  double J = 0.0;
  double J_thth = 0.0;
};

struct ValidationReport {
  std::vector<PointValidation> points;
  double max_C = 0.0;
  double max_J = 0.0;
  double max_J_thth = 0.0;

  bool linkage_ok() const { return max_C <= kLinkageTolerance; }
  bool diffvec_ok() const {
    return max_J <= kDiffVecTolerance && max_J_thth <= kDiffVecTolerance;
  }
  bool passed() const { return linkage_ok() && diffvec_ok(); }
};

// Runs both oracles at every validation point. Errors from the kinematics
// (OutOfWorkspace, NoConvergence) propagate.
ValidationReport run_validation(const MachineParams& params,
                                const ValidationOptions& options = {});

}  // namespace pkmsens

#endif  // PKMSENS_VALIDATION_HPP_
