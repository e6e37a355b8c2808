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

#include <gtest/gtest.h>

#include "pkmsens/errors.hpp"
#include "pkmsens/geometry.hpp"
#include "pkmsens/linkage.hpp"
#include "test_util.hpp"

namespace pkmsens {
namespace {

TEST(RotationMatrix, LegOneIsIdentity) {
  EXPECT_TRUE(rotation_matrix(1).isIdentity(0.0));
}

TEST(RotationMatrix, LegTwoMapsE1ToY) {
  EXPECT_EQ(rotation_matrix(2) * unit_e1(), Vec3(0, 1, 0));
  Mat3 expected;
  expected << 0, 0, -1, 1, 0, 0, 0, -1, 0;
  EXPECT_EQ(rotation_matrix(2), expected);
}

TEST(RotationMatrix, AllProperRotations) {
  for (int leg = 1; leg <= 3; ++leg) {
    const Mat3 r = rotation_matrix(leg);
    EXPECT_TRUE((r.transpose() * r).isIdentity(0.0)) << leg;
    EXPECT_DOUBLE_EQ(r.determinant(), 1.0) << leg;
  }
  Mat3 r3;
  r3 << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  EXPECT_EQ(rotation_matrix(3), r3);
}

TEST(RotationMatrix, RejectsBadLeg) {
  EXPECT_THROW(rotation_matrix(0), std::invalid_argument);
  EXPECT_THROW(rotation_matrix(4), std::invalid_argument);
}

TEST(CheckedInverse, RejectsIllConditioned) {
  Mat3 m = Mat3::Identity();
  m(2, 2) = 1e-13;
  EXPECT_THROW(checked_inverse(m), SingularConfiguration);
  EXPECT_THROW(checked_inverse(Mat3::Zero()), SingularConfiguration);
  m(2, 2) = 1e-6;
  EXPECT_NEAR((checked_inverse(m) * m - Mat3::Identity()).norm(), 0.0, 1e-12);
}

TEST(MachineParams, DefaultsAndValidation) {
  const MachineParams p;
  EXPECT_EQ(p.L[0], 310.58);
  EXPECT_EQ(p.d, 80.0);
  EXPECT_EQ(p.r[2], 31.0);
  EXPECT_EQ(p.a[1], 420.0);
  EXPECT_EQ(p.q1, Vec3::Constant(-73.21));
  EXPECT_EQ(p.q2, Vec3::Constant(126.79));
  EXPECT_DOUBLE_EQ(p.cube_half(), 100.0);
  EXPECT_NO_THROW(p.validate());

  MachineParams bad;
  bad.L[1] = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.d = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.r[0] = -0.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.a[2] = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(InverseKinematics, IsotropicPoint) {
  const MachineParams params;
  const LegStates legs = inverse_kinematics(Vec3::Zero(), params);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(legs[i].rho, 420.0 - 31.0 - 310.58, 1e-12);
    EXPECT_EQ(legs[i].leg_index, i + 1);
    EXPECT_TRUE(legs[i].w.isApprox(rotation_matrix(i + 1) * unit_e1(), 0.0));
  }
  const Vec3 r = implicit_residuals<double>(Vec3::Zero(), nominal_design(Vec3::Zero(), params));
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(InverseKinematics, CornerQ2Direction) {
  const MachineParams params;
  const LegStates legs = inverse_kinematics(params.q2, params);
  EXPECT_NEAR(legs[0].w.x(), 0.8166, 1e-3);
  EXPECT_NEAR(legs[0].w.y(), 0.4082, 1e-3);
  EXPECT_NEAR(legs[0].w.z(), 0.4082, 1e-3);
}

TEST(InverseKinematics, UnreachableOnBoundary) {
  try {
    inverse_kinematics(Vec3(0, 310.58, 0), MachineParams{});
    FAIL() << "expected OutOfWorkspace";
  } catch (const OutOfWorkspace& e) {
    EXPECT_EQ(e.leg(), 1);
  }
  EXPECT_FALSE(is_reachable(Vec3(0, 310.58, 0), MachineParams{}));
  EXPECT_TRUE(is_reachable(Vec3::Zero(), MachineParams{}));
}

TEST(InverseKinematics, LegStateInvariants) {
  const MachineParams params;
  for (const Vec3& p : testing::random_cube_points(200, 11)) {
    const LegStates legs = inverse_kinematics(p, params);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(legs[i].w.norm(), 1.0, 1e-12);
      EXPECT_LT((legs[i].c - legs[i].b - params.L[i] * legs[i].w).norm(), 1e-12);
      EXPECT_GE((rotation_matrix(i + 1).transpose() * legs[i].w).x(), 0.0);
      EXPECT_LT((legs[i].c - (p - params.r[i] * rotation_matrix(i + 1).col(0))).norm(), 1e-12);
    }
    const Vec3 f = implicit_residuals<double>(p, nominal_design(p, params));
    EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(InverseKinematics, RhoContinuousAlongDiagonal) {
  const MachineParams params;
  std::array<double, 3> prev{};
  for (int k = 0; k <= 100; ++k) {
    const double t = -73.21 + 2.0 * k;
    const LegStates legs = inverse_kinematics(diagonal_point(t), params);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GT(legs[i].rho, 0.0);
      if (k > 0) EXPECT_LT(std::abs(legs[i].rho - prev[i]), 10.0);
      prev[i] = legs[i].rho;
    }
  }
}

TEST(ForwardKinematics, IsotropicRoundTrip) {
  const Vec3 p = forward_kinematics({78.42, 78.42, 78.42}, MachineParams{});
  EXPECT_LT(p.norm(), 1e-9);
}

TEST(ForwardKinematics, CornerRoundTrip) {
  const MachineParams params;
  for (const Vec3& q : {params.q1, params.q2}) {
    const LegStates legs = inverse_kinematics(q, params);
    const Vec3 p = forward_kinematics({legs[0].rho, legs[1].rho, legs[2].rho}, params);
    EXPECT_LT((p - q).norm(), 1e-9);
  }
}

TEST(ForwardKinematics, RandomRoundTrips) {
  const MachineParams params;
  for (const Vec3& q : testing::random_cube_points(1000, 5)) {
    const LegStates legs = inverse_kinematics(q, params);
    const Vec3 p = forward_kinematics({legs[0].rho, legs[1].rho, legs[2].rho}, params);
    ASSERT_LT((p - q).norm(), 1e-9) << q.transpose();
  }
}

TEST(ForwardKinematics, InfeasibleRhoDoesNotConverge) {
  // Every slider retracted far enough that no common tool point exists, while
  // the origin guess still lies in the working region of all legs.
  EXPECT_THROW(forward_kinematics({-300.0, -300.0, -300.0}, MachineParams{}), NoConvergence);
  EXPECT_THROW(forward_kinematics({478.42, 78.42, 78.42}, MachineParams{}), OutOfWorkspace);
}

TEST(DiagonalPoint, Corners) {
  const MachineParams params;
  EXPECT_EQ(diagonal_point(0.0), Vec3::Zero());
  EXPECT_EQ(diagonal_point(-73.21), params.q1);
  EXPECT_EQ(diagonal_point(126.79), params.q2);
}

}  // namespace
}  // namespace pkmsens
