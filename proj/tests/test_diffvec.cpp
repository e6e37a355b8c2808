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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/errors.hpp"
#include "pkmsens/linkage.hpp"
#include "pkmsens/sweep.hpp"
#include "test_util.hpp"

namespace pkmsens {
namespace {

const MachineParams kDefaults;
const double kSqrt3 = std::sqrt(3.0);

TEST(DiffVecLayout, ThetaPartSelectsOrientationParameters) {
  FullParamVector eps;
  for (int j = 0; j < kFullParams; ++j) eps(j) = j;
  const ThetaParamVector t = theta_part(eps);
  EXPECT_EQ(t(theta_column(2, ThetaParam::kDl)), full_column(2, FullParam::kDl));
  EXPECT_EQ(t(theta_column(3, ThetaParam::kGammaY)), full_column(3, FullParam::kGammaY));
  EXPECT_EQ(t(theta_column(1, ThetaParam::kThetaAx)), full_column(1, FullParam::kThetaAx));
  EXPECT_FALSE(to_theta_param(FullParam::kThetaAz).has_value());
  EXPECT_EQ(full_param_name(FullParam::kDeX), "de_x");
  EXPECT_EQ(theta_param_name(ThetaParam::kGammaY), "g_y");
}

TEST(BuildD, Isotropic) {
  const Mat3 d = build_D(inverse_kinematics(Vec3::Zero(), kDefaults), 80.0);
  Mat3 expected;
  expected << 0, 1, 0, 0, 0, -1, 1, 0, 0;
  EXPECT_LT((d - 80.0 * expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildD, RowsOrthogonalToRods) {
  for (const Vec3& p : testing::random_cube_points(200, 31)) {
    const LegStates legs = inverse_kinematics(p, kDefaults);
    const Mat3 d = build_D(legs, 80.0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.row(i).dot(legs[i].w), 0.0, 1e-12);
  }
  const Mat3 dq = build_D(inverse_kinematics(kDefaults.q2, kDefaults), 80.0);
  EXPECT_GT(std::abs(dq.determinant()), 1.0);
}

TEST(BuildD, FlatParallelogramRejected) {
  EXPECT_THROW(build_D(inverse_kinematics(Vec3::Zero(), kDefaults), 0.0), FlatParallelogram);
}

TEST(OrientationJacobian, IsotropicColumns) {
  const Matrix3x18 j = orientation_jacobian(Vec3::Zero(), kDefaults);
  for (int leg = 1; leg <= 3; ++leg) {
    EXPECT_EQ(j.col(theta_column(leg, ThetaParam::kDm)).norm(), 0.0);
    EXPECT_LT(j.col(theta_column(leg, ThetaParam::kThetaAx)).norm(), 1e-15);
    EXPECT_LT(j.col(theta_column(leg, ThetaParam::kGammaX)).norm(), 1e-15);
  }
  const Mat3 d_inv = build_D(inverse_kinematics(Vec3::Zero(), kDefaults), 80.0).inverse();
  EXPECT_LT((j.col(theta_column(1, ThetaParam::kDl)) - d_inv.col(0)).norm(), 1e-15);
  EXPECT_NEAR(j.col(theta_column(1, ThetaParam::kDl)).norm(), 1.0 / 80.0, 1e-15);
}

TEST(OrientationJacobian, RepeatedBlockColumnsEqual) {
  for (const Vec3& p : testing::random_cube_points(100, 32)) {
    const Matrix3x18 j = orientation_jacobian(p, kDefaults);
    for (int leg = 1; leg <= 3; ++leg) {
      EXPECT_EQ(j.col(theta_column(leg, ThetaParam::kThetaAy)),
                j.col(theta_column(leg, ThetaParam::kGammaY)));
      EXPECT_EQ(j.col(theta_column(leg, ThetaParam::kThetaAx)),
                j.col(theta_column(leg, ThetaParam::kGammaX)));
    }
  }
}

TEST(PositionJacobians, IsotropicValues) {
  const DiffVecModel m = evaluate_diffvec(Vec3::Zero(), kDefaults);
  EXPECT_LT(m.H.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(m.J_ptheta.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(m.F.isIdentity(1e-15));
  const double pattern[] = {1, 1, 0, 0, 0, 0};
  for (int leg = 1; leg <= 3; ++leg) {
    for (int k = 0; k < 6; ++k) {
      for (int r = 0; r < 3; ++r) {
        const double expected = (r == leg - 1) ? pattern[k] : 0.0;
        EXPECT_NEAR(m.J_pp(r, position_column(leg, static_cast<PositionParam>(k))),
                    expected, 1e-12);
      }
    }
  }
}

TEST(PositionJacobians, LengthColumnsMatchLinkageModel) {
  std::vector<Vec3> points = testing::random_cube_points(50, 33);
  points.push_back(kDefaults.q1);
  points.push_back(kDefaults.q2);
  for (const Vec3& p : points) {
    const PositionJacobians pj = position_jacobians(p, kDefaults);
    const Matrix3x18 c = sensitivity_matrix(p, kDefaults).coeffs;
    for (int leg = 1; leg <= 3; ++leg) {
      const Vec3 a = pj.pp.col(position_column(leg, PositionParam::kDL));
      const Vec3 b = c.col(linkage_column(leg, LinkageParam::kL));
      EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(PositionJacobians, FEqualsNormalizedA) {
  for (const Vec3& p : testing::random_cube_points(50, 34)) {
    const LegStates legs = inverse_kinematics(p, kDefaults);
    const Mat3 f = build_F(legs);
    const Mat3 a = jacobian_A(p, nominal_design(p, kDefaults));
    for (int i = 0; i < 3; ++i) {
      EXPECT_LT((2 * kDefaults.L[i] * f.row(i) - a.row(i)).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(OrthogonalityIdentities, HoldEverywhere) {
  for (const Vec3& p : testing::random_cube_points(1000, 35)) {
    const LegStates legs = inverse_kinematics(p, kDefaults);
    for (int i = 0; i < 3; ++i) {
      const Mat3 r = rotation_matrix(i + 1);
      const Vec3 e2 = r * unit_e2();
      const Vec3 e1 = r * unit_e1();
      EXPECT_NEAR(e2.cross(legs[i].w).dot(e2), 0.0, 1e-15);
      EXPECT_NEAR(e1.cross(legs[i].w).dot(e1), 0.0, 1e-15);
    }
  }
}

TEST(AssembleJ, IsotropicOnlyLengthAndAxisOffset) {
  const Matrix3x33 j = assemble_J(Vec3::Zero(), kDefaults);
  for (int leg = 1; leg <= 3; ++leg) {
    for (int k = 0; k < kFullParamsPerLeg; ++k) {
      const auto param = static_cast<FullParam>(k);
      const double n = j.col(full_column(leg, param)).norm();
      if (param == FullParam::kDL || param == FullParam::kDeX) {
        EXPECT_NEAR(n, 1.0, 1e-12);
      } else {
        EXPECT_LT(n, 1e-12);
      }
    }
  }
}

TEST(AssembleJ, ColumnMapping) {
  const PositionJacobians pj = position_jacobians(kDefaults.q2, kDefaults);
  const Matrix3x33 j = assemble_J(pj.pp, pj.ptheta);
  for (int leg = 1; leg <= 3; ++leg) {
    const auto pp = [&](PositionParam p) { return pj.pp.col(position_column(leg, p)); };
    const auto pt = [&](ThetaParam p) { return pj.ptheta.col(theta_column(leg, p)); };
    const auto jc = [&](FullParam p) { return j.col(full_column(leg, p)); };
    EXPECT_EQ(jc(FullParam::kDL), pp(PositionParam::kDL));
    EXPECT_EQ(jc(FullParam::kDeY), pp(PositionParam::kDeY));
    EXPECT_EQ(jc(FullParam::kThetaAx), pt(ThetaParam::kThetaAx));
    EXPECT_EQ(jc(FullParam::kThetaAy), Vec3(pp(PositionParam::kThetaAy) + pt(ThetaParam::kThetaAy)));
    EXPECT_EQ(jc(FullParam::kThetaAz), pp(PositionParam::kThetaAz));
    EXPECT_EQ(jc(FullParam::kDl), pt(ThetaParam::kDl));
    EXPECT_EQ(jc(FullParam::kDm), pt(ThetaParam::kDm));
    EXPECT_EQ(jc(FullParam::kGammaX), pt(ThetaParam::kGammaX));
    EXPECT_EQ(jc(FullParam::kGammaY), pt(ThetaParam::kGammaY));
  }

  FullParamVector eps = FullParamVector::Zero();
  eps(full_column(1, FullParam::kDL)) = 0.3;
  eps(full_column(3, FullParam::kDL)) = -0.2;
  const Vec3 expected = 0.3 * pj.pp.col(position_column(1, PositionParam::kDL)) -
                        0.2 * pj.pp.col(position_column(3, PositionParam::kDL));
  EXPECT_LT((j * eps - expected).norm(), 1e-15);
}

TEST(Indices, Isotropic) {
  const DiffVecModel m = evaluate_diffvec(Vec3::Zero(), kDefaults);
  for (int k = 0; k < kFullParamsPerLeg; ++k) {
    const auto p = static_cast<FullParam>(k);
    const double expected = (p == FullParam::kDL || p == FullParam::kDeX) ? kSqrt3 : 0.0;
    EXPECT_NEAR(m.mu[k], expected, 1e-12) << full_param_name(p);
  }
  EXPECT_NEAR(m.nu[0], kSqrt3 / 80.0, 1e-12);
  EXPECT_NEAR(m.nu[1], 0.0, 1e-12);
  EXPECT_NEAR(m.nu[2], 0.0, 1e-12);
  EXPECT_NEAR(m.nu[3], kSqrt3, 1e-12);
  EXPECT_NEAR(m.nu[4], 0.0, 1e-12);
  EXPECT_NEAR(m.nu[5], kSqrt3, 1e-12);
}

TEST(Indices, ZeroMatrices) {
  for (double v : position_indices(Matrix3x33::Zero())) EXPECT_EQ(v, 0.0);
  for (double v : orientation_indices(Matrix3x18::Zero())) EXPECT_EQ(v, 0.0);
  for (double v : orientation_index_global_rotation(Matrix3x18::Zero())) EXPECT_EQ(v, 0.0);
}

TEST(Indices, OrientationPairsEqual) {
  for (const Vec3& p : testing::random_cube_points(50, 36)) {
    const DiffVecModel m = evaluate_diffvec(p, kDefaults);
    EXPECT_EQ(m.nu[3], m.nu[5]);
    for (double v : m.nu) EXPECT_GE(v, 0.0);
  }
}

TEST(Indices, LegSymmetry) {
  for (const Vec3& p : testing::random_cube_points(50, 37)) {
    const DiffVecModel a = evaluate_diffvec(p, kDefaults);
    const DiffVecModel b = evaluate_diffvec(testing::cyclic(p), kDefaults);
    for (int r = 0; r < kThetaParamsPerLeg; ++r) EXPECT_NEAR(a.nu[r], b.nu[r], 1e-9);
    for (int k = 0; k < kFullParamsPerLeg; ++k) EXPECT_NEAR(a.mu[k], b.mu[k], 1e-9);
  }
}

TEST(Indices, DiagonalMaximumAtQ2) {
  const DiffVecModel m0 = evaluate_diffvec(Vec3::Zero(), kDefaults);
  const DiffVecModel mq = evaluate_diffvec(kDefaults.q2, kDefaults);
  EXPECT_GT(mq.mu[0], m0.mu[0]);
}

TEST(GlobalRotation, EulerMatrixAndAngle) {
  const Mat3 q = euler_xyz_rotation(0.1, -0.2, 0.3);
  EXPECT_TRUE((q.transpose() * q).isIdentity(1e-14));
  EXPECT_NEAR(q.determinant(), 1.0, 1e-14);
  const Mat3 ref = (Eigen::AngleAxisd(0.3, Vec3::UnitZ()) * Eigen::AngleAxisd(-0.2, Vec3::UnitY()) *
                    Eigen::AngleAxisd(0.1, Vec3::UnitX())).toRotationMatrix();
  EXPECT_LT((q - ref).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(rotation_angle(q), Eigen::AngleAxisd(ref).angle(), 1e-14);
}

TEST(GlobalRotation, SingleAxis) {
  for (double phi : {1e-9, 1e-3, 0.5, 3.0}) {
    EXPECT_NEAR(rotation_angle(euler_xyz_rotation(phi, 0, 0)), phi, 1e-14 * std::max(1.0, phi));
    EXPECT_NEAR(rotation_angle(euler_xyz_rotation(0, phi, 0)), phi, 1e-14 * std::max(1.0, phi));
    EXPECT_NEAR(rotation_angle(euler_xyz_rotation(0, 0, phi)), phi, 1e-14 * std::max(1.0, phi));
  }
}

TEST(GlobalRotation, SmallAngleExpansion) {
  // The exact expansion carries a cubic cross term: angle^2 = sum - xyz + O(4).
  const double x = 1e-3, y = -0.7e-3, z = 0.4e-3;
  const double angle = rotation_angle(euler_xyz_rotation(x, y, z));
  const double sum = x * x + y * y + z * z;
  EXPECT_NEAR(angle * angle, sum - x * y * z, 1e-11);
  EXPECT_GT(std::abs(angle * angle - sum), 1e-10);
}

TEST(GlobalRotation, RejectsLargeAggregates) {
  Matrix3x18 j = Matrix3x18::Zero();
  j(0, 0) = 4.0;
  EXPECT_THROW(orientation_index_global_rotation(j), std::invalid_argument);
}

TEST(DiffVec, OutOfWorkspace) {
  EXPECT_THROW(evaluate_diffvec(Vec3(0, 311, 0), kDefaults), OutOfWorkspace);
}

}  // namespace
}  // namespace pkmsens
