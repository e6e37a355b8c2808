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

// Independent numerical oracles for the analytic sensitivity matrices.
//
// The linkage oracle re-solves F(p, q) = 0 for perturbed designs. The
// differential-vector oracle builds both rods of every parallelogram from the
// leg chain with linearized rotations [I + theta x] and solves the six rod
// length constraints for the platform pose error. It therefore checks the
// algebra that leads from the chain equations to J and J_thth, not an exact
// rotation model. The platform rotation is applied in the base frame in both
// C_ij - C_i and C_i - P.
//
// Both oracles run in long double and use their own finite-difference Newton
// iterations, so they share nothing with jacobian_A/B or D, E, F, G, H.

#ifndef PKMSENS_ORACLE_HPP_
#define PKMSENS_ORACLE_HPP_

#include <array>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/geometry.hpp"
#include "pkmsens/linkage.hpp"

namespace pkmsens {

inline constexpr double kDefaultLengthStep = 1e-6;  // mm
inline constexpr double kDefaultAngleStep = 1e-8;   // rad

// Central-difference sensitivity: column j is
// (solve_p(q0 + h e_j) - solve_p(q0 - h e_j)) / 2h, where solve_p Newton-solves
// F(p, q) = 0 starting from p. Requires h in [1e-8, 1e-3] (std::invalid_argument
// otherwise); throws NoConvergence if a perturbed solve fails.
Matrix3x18 fd_linkage_sensitivity(const Vec3& p, const MachineParams& params,
                                  double h = kDefaultLengthStep);

// Raw per-leg variations, in the frame of prismatic joint i unless noted.
struct LegPerturbation {
  Vec3 da = Vec3::Zero();       // position error of A_i
  double drho = 0.0;            // joint displacement error
  Vec3 theta_a = Vec3::Zero();  // direction error of the joint
  double db = 0.0;              // length error of link B_i1 B_i2
  Vec3 theta_b = Vec3::Zero();  // orientation error of B_i1 B_i2
  double dL1 = 0.0;             // length error of rod B_i1 C_i1
  double dL2 = 0.0;             // length error of rod B_i2 C_i2
  double dc_len = 0.0;          // length error of link C_i1 C_i2
  Vec3 theta_c = Vec3::Zero();  // orientation error of C_i1 C_i2
  Vec3 dc_pos = Vec3::Zero();   // position error of C_i
};

using PerturbedLegInputs = std::array<LegPerturbation, kNumLegs>;

struct PoseError {
  Vec3 dp = Vec3::Zero();      // mm, base frame
  Vec3 dtheta = Vec3::Zero();  // rad, base frame
};

// Reduced parameters: de = da + drho e_1 - dc_pos, gamma = theta_b - theta_c
// (z dropped), dm = db - dc_len, dl = dL1 - dL2, dL = (dL1 + dL2) / 2.
FullParamVector reduce_perturbation(const PerturbedLegInputs& inputs);

// One raw realisation of a reduced vector: dL and dl split over the two
// rods, de carried by da, dm by db and gamma by theta_b.
PerturbedLegInputs encode_perturbation(const FullParamVector& eps);

// ||c_ij - b_ij||^2 - (L_i + dL_ij)^2 for (leg 1, rod 1), (leg 1, rod 2), ...,
// (leg 3, rod 2), in mm^2. The nominal pose is forward_kinematics(rho).
std::array<double, 6> closure_residuals(const PoseError& pose,
                                        const std::array<double, kNumLegs>& rho,
                                        const PerturbedLegInputs& inputs,
                                        const MachineParams& params);

// Newton solve of closure_residuals = 0 from the zero pose error. Requires
// every length variation <= 1 mm and every angle <= 0.05 rad in magnitude
// (std::invalid_argument). Throws NoConvergence after 50 iterations.
PoseError solve_perturbed_pose(const std::array<double, kNumLegs>& rho,
                               const PerturbedLegInputs& inputs,
                               const MachineParams& params);

// True for the angular entries of the full parameter vector.
bool is_angle_param(FullParam param);

struct FdDiffVecJacobians {
  Matrix3x33 J = Matrix3x33::Zero();          // d(dp) / d(eps_q)
  Matrix3x18 J_thth = Matrix3x18::Zero();     // d(dtheta) / d(eps_theta)
  Matrix3x33 J_orientation = Matrix3x33::Zero();  // d(dtheta) / d(eps_q)
};

// Central differences of solve_perturbed_pose along every full-parameter
// direction, with step h_length for lengths and h_angle for angles.
FdDiffVecJacobians fd_diffvec_jacobians(const Vec3& p,
                                        const MachineParams& params,
                                        double h_length = kDefaultLengthStep,
                                        double h_angle = kDefaultAngleStep);

}  // namespace pkmsens

#endif  // PKMSENS_ORACLE_HPP_
