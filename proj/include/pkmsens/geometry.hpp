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

// Machine constants, leg frames and nominal kinematics of the three-leg
// orthogonal translational PKM. All lengths are in mm, all angles in rad.

#ifndef PKMSENS_GEOMETRY_HPP_
#define PKMSENS_GEOMETRY_HPP_

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pkmsens {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kNumLegs = 3;

// Any 3x3 system with a larger 2-norm condition number is rejected.
inline constexpr double kMaxConditionNumber = 1e12;

double condition_number(const Mat3& m);

// Returns m^-1, throwing SingularConfiguration when cond(m) > max_condition.
// This is the only sanctioned way to invert a Mat3 in the library.
Mat3 checked_inverse(const Mat3& m, double max_condition = kMaxConditionNumber);

struct MachineParams {
  // Distance O-A_i from the frame origin to the base of prismatic joint i.
  // Not published for the prototype; 420 is the smallest round value that
  // keeps every rho_i positive over the prescribed cube.
  std::array<double, kNumLegs> a{420.0, 420.0, 420.0};
  // Parallelogram length L_i.
  std::array<double, kNumLegs> L{310.58, 310.58, 310.58};
  // Parallelogram width.
  double d = 80.0;
  // Distance P-C_i.
  std::array<double, kNumLegs> r{31.0, 31.0, 31.0};
  // Opposite vertices of the prescribed cubic workspace on the x=y=z axis.
  Vec3 q1{-73.21, -73.21, -73.21};
  Vec3 q2{126.79, 126.79, 126.79};

  // Half of the cube edge (q2.x - q1.x) / 2.
  double cube_half() const { return 0.5 * (q2.x() - q1.x()); }
  Vec3 cube_center() const { return 0.5 * (q1 + q2); }

  // Throws std::invalid_argument on non-positive a, L, d or negative r, or
  // when q1 is not component-wise <= q2.
  void validate() const;
};

// Solved nominal kinematics of one leg, expressed in the base frame.
struct LegState {
  int leg_index = 1;  // 1..3
  double rho = 0.0;   // prismatic joint displacement
  Vec3 w = Vec3::Zero();  // unit direction B_i -> C_i
  Vec3 b = Vec3::Zero();  // point B_i (end of prismatic joint)
  Vec3 c = Vec3::Zero();  // point C_i (platform attachment)
};

using LegStates = std::array<LegState, kNumLegs>;

// Transformation from the frame of prismatic joint `leg` (1..3) to the base
// frame. R_i e_1 is the joint axis and R_i e_3 the parallelogram width
// direction. Throws std::invalid_argument for leg outside 1..3.
Mat3 rotation_matrix(int leg);

// Unit vectors of the leg frames: e_1 along the joint, e_2 = (0, 0, 1) normal
// to the parallelogram axis plane.
inline Vec3 unit_e1() { return Vec3::UnitX(); }
inline Vec3 unit_e2() { return Vec3::UnitZ(); }

// Closed-form inverse kinematics in the working mode where the slider sits
// behind the tool attachment (w expressed in the leg frame has x >= 0).
// Throws OutOfWorkspace when L_i^2 - (off-axis distance)^2 <= 0 for a leg.
LegStates inverse_kinematics(const Vec3& p, const MachineParams& params);

// Reachability predicate matching inverse_kinematics.
bool is_reachable(const Vec3& p, const MachineParams& params);

// Newton solve of the three implicit length constraints for p, given the
// joint displacements. Throws OutOfWorkspace if `guess` is unreachable and
// NoConvergence if no root is found in 50 iterations.
Vec3 forward_kinematics(const std::array<double, kNumLegs>& rho,
                        const MachineParams& params,
                        const Vec3& guess = Vec3::Zero());

// Point (t, t, t) of the Q1Q2 diagonal.
inline Vec3 diagonal_point(double t) { return Vec3(t, t, t); }

}  // namespace pkmsens

#endif  // PKMSENS_GEOMETRY_HPP_
