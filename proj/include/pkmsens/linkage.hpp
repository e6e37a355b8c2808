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

// Linkage kinematic analysis: differentiation of the three implicit length
// constraints F_i(p, q) = 0 with respect to the platform position p and the
// 18 design parameters q, giving the sensitivity matrix C = -A^-1 B.

#ifndef PKMSENS_LINKAGE_HPP_
#define PKMSENS_LINKAGE_HPP_

#include <array>
#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "pkmsens/geometry.hpp"

namespace pkmsens {

// Per-leg column order of the design vector. For leg 1 (h, k) are the offsets
// (b_1y, b_1z) of point B_1, for leg 2 (b_2x, b_2z), for leg 3 (b_3x, b_3y).
// The order is part of the public contract.
enum class LinkageParam : int { kA = 0, kH, kK, kRho, kL, kR };

inline constexpr int kLinkageParamsPerLeg = 6;
inline constexpr int kLinkageParams = kNumLegs * kLinkageParamsPerLeg;

using LinkageDesign = Eigen::Matrix<double, kLinkageParams, 1>;
using Matrix3x18 = Eigen::Matrix<double, 3, kLinkageParams>;

constexpr int linkage_column(int leg, LinkageParam param) {
  return (leg - 1) * kLinkageParamsPerLeg + static_cast<int>(param);
}

// Base-frame coordinate index driven by leg `leg` (x for leg 1, ...).
constexpr int axis_coordinate(int leg) { return leg - 1; }

// Base-frame coordinate indices offset by (h, k) of leg `leg`.
constexpr std::array<int, 2> off_axis_coordinates(int leg) {
  switch (leg) {
    case 1: return {1, 2};
    case 2: return {0, 2};
    default: return {0, 1};
  }
}

// "a", "b_y", "b_z", "rho", "L", "r" with the leg-specific b offsets.
std::string linkage_param_name(int leg, LinkageParam param);

// Absolute design values at the nominal geometry: a_i, L_i, r_i from params,
// zero B-offsets and rho_i from inverse kinematics at p.
LinkageDesign nominal_design(const Vec3& p, const MachineParams& params);

// u_i = C_i - B_i as implied by the implicit functions.
template <typename T>
Eigen::Matrix<T, 3, 1> leg_offset(const Eigen::Matrix<T, 3, 1>& p,
                                  const Eigen::Matrix<T, kLinkageParams, 1>& q,
                                  int leg) {
  const auto at = [&](LinkageParam param) {
    return q(linkage_column(leg, param));
  };
  const int ax = axis_coordinate(leg);
  const auto off = off_axis_coordinates(leg);
  Eigen::Matrix<T, 3, 1> u;
  u(ax) = -at(LinkageParam::kR) + p(ax) + at(LinkageParam::kA) -
          at(LinkageParam::kRho);
  u(off[0]) = p(off[0]) - at(LinkageParam::kH);
  u(off[1]) = p(off[1]) - at(LinkageParam::kK);
  return u;
}

// (F_1, F_2, F_3) in mm^2, e.g.
// F_1 = (-r_1 + p_x + a_1 - rho_1)^2 + (p_y - b_1y)^2 + (p_z - b_1z)^2 - L_1^2.
template <typename T>
Eigen::Matrix<T, 3, 1> implicit_residuals(
    const Eigen::Matrix<T, 3, 1>& p,
    const Eigen::Matrix<T, kLinkageParams, 1>& q) {
  Eigen::Matrix<T, 3, 1> f;
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    const T L = q(linkage_column(leg, LinkageParam::kL));
    f(leg - 1) = leg_offset<T>(p, q, leg).squaredNorm() - L * L;
  }
  return f;
}

// dF/dp; row i is 2 (c_i - b_i)^T.
Mat3 jacobian_A(const Vec3& p, const LinkageDesign& q);

// dF/dq, block diagonal with one 1x6 block per leg.
Matrix3x18 jacobian_B(const Vec3& p, const LinkageDesign& q);

struct SensitivityMatrix {
  Vec3 point = Vec3::Zero();
  Matrix3x18 coeffs = Matrix3x18::Zero();  // dp_m / dq_j
};

// C = -A^-1 B at the nominal design. Throws OutOfWorkspace for unreachable
// points and SingularConfiguration when cond(A) > 1e12.
SensitivityMatrix sensitivity_matrix(const Vec3& p, const MachineParams& params);

struct MeanSensitivity {
  Matrix3x18 mean_abs = Matrix3x18::Zero();
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

// Mean of |C| over a grid_n^3 uniform grid of the prescribed cube. Points that
// fail (out of workspace) are skipped and counted. threads == 0 picks the
// hardware concurrency; the result does not depend on the thread count.
// Throws std::invalid_argument for grid_n < 2 and EmptyGrid when every point
// was rejected.
MeanSensitivity mean_sensitivity(int grid_n, const MachineParams& params,
                                 unsigned threads = 0);

struct GlobalSensitivity {
  Vec3 row_norms = Vec3::Zero();  // sqrt(sum_j C_mj^2) per Cartesian row
  double total = 0.0;             // Frobenius norm
};

GlobalSensitivity global_sensitivity(const Matrix3x18& c);

}  // namespace pkmsens

#endif  // PKMSENS_LINKAGE_HPP_
