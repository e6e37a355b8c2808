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

#include "pkmsens/linkage.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "compensated_sum.hpp"
#include "pkmsens/errors.hpp"
#include "pkmsens/sweep.hpp"

namespace pkmsens {
std::string linkage_param_name(int leg, LinkageParam param) {
  static constexpr const char* kAxes[] = {"x", "y", "z"};
  const auto off = off_axis_coordinates(leg);
  switch (param) {
    case LinkageParam::kA: return "a";
    case LinkageParam::kH: return std::string("b_") + kAxes[off[0]];
    case LinkageParam::kK: return std::string("b_") + kAxes[off[1]];
    case LinkageParam::kRho: return "rho";
    case LinkageParam::kL: return "L";
    case LinkageParam::kR: return "r";
  }
  throw std::invalid_argument("unknown linkage parameter");
}

LinkageDesign nominal_design(const Vec3& p, const MachineParams& params) {
  const LegStates legs = inverse_kinematics(p, params);
  LinkageDesign q = LinkageDesign::Zero();
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    q(linkage_column(leg, LinkageParam::kA)) = params.a[leg - 1];
    q(linkage_column(leg, LinkageParam::kRho)) = legs[leg - 1].rho;
    q(linkage_column(leg, LinkageParam::kL)) = params.L[leg - 1];
    q(linkage_column(leg, LinkageParam::kR)) = params.r[leg - 1];
  }
  return q;
}

Mat3 jacobian_A(const Vec3& p, const LinkageDesign& q) {
  Mat3 a;
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    a.row(leg - 1) = 2.0 * leg_offset<double>(p, q, leg).transpose();
  }
  return a;
}

Matrix3x18 jacobian_B(const Vec3& p, const LinkageDesign& q) {
  Matrix3x18 b = Matrix3x18::Zero();
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    const Vec3 u = leg_offset<double>(p, q, leg);
    const double u_axis = u(axis_coordinate(leg));
    const auto off = off_axis_coordinates(leg);
    const int row = leg - 1;
    b(row, linkage_column(leg, LinkageParam::kA)) = 2.0 * u_axis;
    b(row, linkage_column(leg, LinkageParam::kH)) = -2.0 * u(off[0]);
    b(row, linkage_column(leg, LinkageParam::kK)) = -2.0 * u(off[1]);
    b(row, linkage_column(leg, LinkageParam::kRho)) = -2.0 * u_axis;
    b(row, linkage_column(leg, LinkageParam::kL)) =
        -2.0 * q(linkage_column(leg, LinkageParam::kL));
    b(row, linkage_column(leg, LinkageParam::kR)) = -2.0 * u_axis;
  }
  return b;
}

SensitivityMatrix sensitivity_matrix(const Vec3& p,
                                     const MachineParams& params) {
  const LinkageDesign q = nominal_design(p, params);
  const Mat3 a_inv = checked_inverse(jacobian_A(p, q));
  SensitivityMatrix c;
  c.point = p;
  c.coeffs = -a_inv * jacobian_B(p, q);
  return c;
}

MeanSensitivity mean_sensitivity(int grid_n, const MachineParams& params,
                                 unsigned threads) {
  const std::vector<Vec3> points = grid_points(grid_n, params);
  std::vector<Column> schema;
  schema.reserve(3 * kLinkageParams);
  for (int m = 0; m < 3; ++m) {
    for (int j = 0; j < kLinkageParams; ++j) {
      schema.push_back({"abs_c_" + std::to_string(m) + "_" + std::to_string(j),
                        "mm/mm"});
    }
  }
  const SweepTable table = sweep(
      points,
      [&](const Vec3& p) {
        const Matrix3x18 c = sensitivity_matrix(p, params).coeffs.cwiseAbs();
        std::vector<double> row(3 * kLinkageParams);
        for (int m = 0; m < 3; ++m) {
          for (int j = 0; j < kLinkageParams; ++j) {
            row[m * kLinkageParams + j] = c(m, j);
          }
        }
        return row;
      },
      std::move(schema), {threads, params, "grid " + std::to_string(grid_n)});

  if (table.rows.empty()) {
    throw EmptyGrid("every grid point was rejected");
  }
  MeanSensitivity out;
  out.evaluated = table.rows.size();
  out.skipped = table.skipped_count();
  for (int m = 0; m < 3; ++m) {
    for (int j = 0; j < kLinkageParams; ++j) {
      internal::CompensatedSum acc;
      for (const auto& row : table.rows) acc.add(row.values[m * kLinkageParams + j]);
      out.mean_abs(m, j) = acc.value() / static_cast<double>(out.evaluated);
    }
  }
  return out;
}

GlobalSensitivity global_sensitivity(const Matrix3x18& c) {
  GlobalSensitivity g;
  for (int m = 0; m < 3; ++m) g.row_norms(m) = c.row(m).norm();
  g.total = c.norm();
  return g;
}

}  // namespace pkmsens
