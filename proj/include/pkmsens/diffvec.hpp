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

// Differential vector method: first-order error-mapping Jacobians from the
// leg closure chains O-A_i-B_i-B_ij-C_ij-C_i-P, separating the orientation
// error of the platform (J_thth) from its position error (J).

#ifndef PKMSENS_DIFFVEC_HPP_
#define PKMSENS_DIFFVEC_HPP_

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "pkmsens/geometry.hpp"
#include "pkmsens/linkage.hpp"

namespace pkmsens {

// Per-leg order of the parameters driving the orientation error. Angles are
// expressed in the leg frame; theta_A is the joint-direction error and gamma
// the parallelogram orientation error (theta_B - theta_C).
enum class ThetaParam : int { kDl = 0, kDm, kThetaAx, kThetaAy, kGammaX, kGammaY };

// Per-leg order of all 11 parameters driving the position error.
enum class FullParam : int {
  kDL = 0,
  kDeX,
  kDeY,
  kDeZ,
  kThetaAx,
  kThetaAy,
  kThetaAz,
  kDl,
  kDm,
  kGammaX,
  kGammaY,
};

// Per-leg order of the reduced position-path parameters (theta_Ax dropped).
enum class PositionParam : int { kDL = 0, kDeX, kDeY, kDeZ, kThetaAy, kThetaAz };

inline constexpr int kThetaParamsPerLeg = 6;
inline constexpr int kThetaParams = kNumLegs * kThetaParamsPerLeg;
inline constexpr int kFullParamsPerLeg = 11;
inline constexpr int kFullParams = kNumLegs * kFullParamsPerLeg;
inline constexpr int kPositionParamsPerLeg = 6;

using ThetaParamVector = Eigen::Matrix<double, kThetaParams, 1>;
using FullParamVector = Eigen::Matrix<double, kFullParams, 1>;
using Matrix3x21 = Eigen::Matrix<double, 3, 21>;
using Matrix3x33 = Eigen::Matrix<double, 3, kFullParams>;

constexpr int theta_column(int leg, ThetaParam param) {
  return (leg - 1) * kThetaParamsPerLeg + static_cast<int>(param);
}
constexpr int full_column(int leg, FullParam param) {
  return (leg - 1) * kFullParamsPerLeg + static_cast<int>(param);
}
constexpr int position_column(int leg, PositionParam param) {
  return (leg - 1) * kPositionParamsPerLeg + static_cast<int>(param);
}

// "dL", "de_x", "de_y", "de_z", "thA_x", "thA_y", "thA_z", "dl", "dm",
// "g_x", "g_y".
std::string_view full_param_name(FullParam param);
// "dl", "dm", "thA_x", "thA_y", "g_x", "g_y".
std::string_view theta_param_name(ThetaParam param);

// The orientation-path parameter a full parameter corresponds to, if any.
std::optional<ThetaParam> to_theta_param(FullParam param);

// Extracts (dl, dm, thA_x, thA_y, g_x, g_y) of every leg from a full vector.
ThetaParamVector theta_part(const FullParamVector& eps);

// Row i = d (R_i e_2 x w_i)^T. Throws FlatParallelogram when cond(D) > 1e12.
Mat3 build_D(const LegStates& legs, double d);

// Block-diagonal, leg block
// [1 | w^T R e_2 | d (R e_2 x w)^T R (x, y) | d (R e_2 x w)^T R (x, y)].
Matrix3x18 build_E(const LegStates& legs, double d);

// Rows w_i^T.
Mat3 build_F(const LegStates& legs);

// Block-diagonal, leg block [1 | w^T R | rho (R e_1 x w)^T R], 7 columns per
// leg ordered (dL, de_x, de_y, de_z, thA_x, thA_y, thA_z).
Matrix3x21 build_G(const LegStates& legs);

// G without the thA_x columns, which vanish identically.
Matrix3x18 reduce_G(const Matrix3x21& g);

// Row i = -(R_i c_0 x w_i)^T with c_0 = (-r_i, 0, 0).
Mat3 build_H(const LegStates& legs, const MachineParams& params);

struct DiffVecModel {
  Vec3 point = Vec3::Zero();
  LegStates legs;
  Mat3 D = Mat3::Zero();
  Matrix3x18 E = Matrix3x18::Zero();
  Mat3 F = Mat3::Zero();
  Matrix3x21 G = Matrix3x21::Zero();
  Mat3 H = Mat3::Zero();
  Matrix3x18 J_thth = Matrix3x18::Zero();    // columns in ThetaParam order
  Matrix3x18 J_pp = Matrix3x18::Zero();      // columns in PositionParam order
  Matrix3x18 J_ptheta = Matrix3x18::Zero();  // columns in ThetaParam order
  Matrix3x33 J = Matrix3x33::Zero();         // columns in FullParam order
  std::array<double, kFullParamsPerLeg> mu{};
  std::array<double, kThetaParamsPerLeg> nu{};
  std::array<double, kThetaParamsPerLeg> nu_alt{};
};

// Evaluates every matrix and index at p. Throws OutOfWorkspace,
// FlatParallelogram or SingularConfiguration.
DiffVecModel evaluate_diffvec(const Vec3& p, const MachineParams& params);

// J_thth = D^-1 E.
Matrix3x18 orientation_jacobian(const Vec3& p, const MachineParams& params);

struct PositionJacobians {
  Matrix3x18 pp;      // F^-1 G (reduced)
  Matrix3x18 ptheta;  // F^-1 H J_thth
};

PositionJacobians position_jacobians(const Vec3& p, const MachineParams& params);

// Places every physical parameter in exactly one column: dL and de from
// J_pp, thA_x from J_ptheta, thA_y from both paths, thA_z from J_pp, and
// dl, dm, g_x, g_y from J_ptheta.
Matrix3x33 assemble_J(const Matrix3x18& j_pp, const Matrix3x18& j_ptheta);
Matrix3x33 assemble_J(const Vec3& p, const MachineParams& params);

// mu_k = sqrt(sum over legs and rows of J(:, leg k)^2), FullParam order.
std::array<double, kFullParamsPerLeg> position_indices(const Matrix3x33& j);

// nu_r = sqrt(sum over legs and rows of J_thth(:, leg r)^2), ThetaParam order.
std::array<double, kThetaParamsPerLeg> orientation_indices(
    const Matrix3x18& j_thth);

// Rotation built from the per-axis angles as Rz(z) Ry(y) Rx(x).
Mat3 euler_xyz_rotation(double x, double y, double z);

// Rotation angle of a proper rotation matrix, i.e. arccos((tr Q - 1) / 2),
// evaluated through atan2 for accuracy near zero.
double rotation_angle(const Mat3& q);

// Alternative orientation index: the rotation angle of Q_r built from the
// per-axis aggregates nu_xr, nu_yr, nu_zr (row-wise RSS over legs).
std::array<double, kThetaParamsPerLeg> orientation_index_global_rotation(
    const Matrix3x18& j_thth);

}  // namespace pkmsens

#endif  // PKMSENS_DIFFVEC_HPP_
