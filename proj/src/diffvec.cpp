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

#include "pkmsens/diffvec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pkmsens/errors.hpp"

namespace pkmsens {

std::string_view full_param_name(FullParam param) {
  switch (param) {
    case FullParam::kDL: return "dL";
    case FullParam::kDeX: return "de_x";
    case FullParam::kDeY: return "de_y";
    case FullParam::kDeZ: return "de_z";
    case FullParam::kThetaAx: return "thA_x";
    case FullParam::kThetaAy: return "thA_y";
    case FullParam::kThetaAz: return "thA_z";
    case FullParam::kDl: return "dl";
    case FullParam::kDm: return "dm";
    case FullParam::kGammaX: return "g_x";
    case FullParam::kGammaY: return "g_y";
  }
  throw std::invalid_argument("unknown full parameter");
}

std::string_view theta_param_name(ThetaParam param) {
  switch (param) {
    case ThetaParam::kDl: return "dl";
    case ThetaParam::kDm: return "dm";
    case ThetaParam::kThetaAx: return "thA_x";
    case ThetaParam::kThetaAy: return "thA_y";
    case ThetaParam::kGammaX: return "g_x";
    case ThetaParam::kGammaY: return "g_y";
  }
  throw std::invalid_argument("unknown orientation parameter");
}

std::optional<ThetaParam> to_theta_param(FullParam param) {
  switch (param) {
    case FullParam::kThetaAx: return ThetaParam::kThetaAx;
    case FullParam::kThetaAy: return ThetaParam::kThetaAy;
    case FullParam::kDl: return ThetaParam::kDl;
    case FullParam::kDm: return ThetaParam::kDm;
    case FullParam::kGammaX: return ThetaParam::kGammaX;
    case FullParam::kGammaY: return ThetaParam::kGammaY;
    default: return std::nullopt;
  }
}

ThetaParamVector theta_part(const FullParamVector& eps) {
  ThetaParamVector out = ThetaParamVector::Zero();
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    for (int k = 0; k < kFullParamsPerLeg; ++k) {
      const auto param = static_cast<FullParam>(k);
      if (const auto t = to_theta_param(param)) {
        out(theta_column(leg, *t)) = eps(full_column(leg, param));
      }
    }
  }
  return out;
}

Mat3 build_D(const LegStates& legs, double d) {
  Mat3 m;
  for (int i = 0; i < kNumLegs; ++i) {
    const Mat3 r = rotation_matrix(i + 1);
    m.row(i) = d * (r * unit_e2()).cross(legs[i].w).transpose();
  }
  if (!(condition_number(m) <= kMaxConditionNumber)) {
    throw FlatParallelogram("parallelogram normals are degenerate");
  }
  return m;
}

Matrix3x18 build_E(const LegStates& legs, double d) {
  Matrix3x18 e = Matrix3x18::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    const int leg = i + 1;
    const Mat3 r = rotation_matrix(leg);
    const Vec3& w = legs[i].w;
    const Vec3 normal = (r * unit_e2()).cross(w);
    const Eigen::RowVector3d angular = d * normal.transpose() * r;
    e(i, theta_column(leg, ThetaParam::kDl)) = 1.0;
    e(i, theta_column(leg, ThetaParam::kDm)) = w.dot(r * unit_e2());
    e(i, theta_column(leg, ThetaParam::kThetaAx)) = angular(0);
    e(i, theta_column(leg, ThetaParam::kThetaAy)) = angular(1);
    e(i, theta_column(leg, ThetaParam::kGammaX)) = angular(0);
    e(i, theta_column(leg, ThetaParam::kGammaY)) = angular(1);
  }
  return e;
}

Mat3 build_F(const LegStates& legs) {
  Mat3 f;
  for (int i = 0; i < kNumLegs; ++i) f.row(i) = legs[i].w.transpose();
  return f;
}

Matrix3x21 build_G(const LegStates& legs) {
  Matrix3x21 g = Matrix3x21::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    const Mat3 r = rotation_matrix(i + 1);
    const Vec3& w = legs[i].w;
    const int base = 7 * i;
    g(i, base) = 1.0;
    g.block<1, 3>(i, base + 1) = w.transpose() * r;
    g.block<1, 3>(i, base + 4) =
        legs[i].rho * (r * unit_e1()).cross(w).transpose() * r;
  }
  return g;
}

Matrix3x18 reduce_G(const Matrix3x21& g) {
  Matrix3x18 out = Matrix3x18::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    const int leg = i + 1;
    const int base = 7 * i;
    out.block<3, 4>(0, position_column(leg, PositionParam::kDL)) =
        g.block<3, 4>(0, base);
    out.col(position_column(leg, PositionParam::kThetaAy)) = g.col(base + 5);
    out.col(position_column(leg, PositionParam::kThetaAz)) = g.col(base + 6);
  }
  return out;
}

Mat3 build_H(const LegStates& legs, const MachineParams& params) {
  Mat3 h;
  for (int i = 0; i < kNumLegs; ++i) {
    const Vec3 c0(-params.r[i], 0.0, 0.0);
    h.row(i) = -(rotation_matrix(i + 1) * c0).cross(legs[i].w).transpose();
  }
  return h;
}

Matrix3x33 assemble_J(const Matrix3x18& j_pp, const Matrix3x18& j_ptheta) {
  Matrix3x33 j = Matrix3x33::Zero();
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    const auto pp = [&](PositionParam p) { return j_pp.col(position_column(leg, p)); };
    const auto pt = [&](ThetaParam p) { return j_ptheta.col(theta_column(leg, p)); };
    const auto out = [&](FullParam p) { return j.col(full_column(leg, p)); };
    out(FullParam::kDL) = pp(PositionParam::kDL);
    out(FullParam::kDeX) = pp(PositionParam::kDeX);
    out(FullParam::kDeY) = pp(PositionParam::kDeY);
    out(FullParam::kDeZ) = pp(PositionParam::kDeZ);
    out(FullParam::kThetaAx) = pt(ThetaParam::kThetaAx);
    out(FullParam::kThetaAy) = pp(PositionParam::kThetaAy) + pt(ThetaParam::kThetaAy);
    out(FullParam::kThetaAz) = pp(PositionParam::kThetaAz);
    out(FullParam::kDl) = pt(ThetaParam::kDl);
    out(FullParam::kDm) = pt(ThetaParam::kDm);
    out(FullParam::kGammaX) = pt(ThetaParam::kGammaX);
    out(FullParam::kGammaY) = pt(ThetaParam::kGammaY);
  }
  return j;
}

std::array<double, kFullParamsPerLeg> position_indices(const Matrix3x33& j) {
  std::array<double, kFullParamsPerLeg> mu{};
  for (int k = 0; k < kFullParamsPerLeg; ++k) {
    double sum = 0.0;
    for (int leg = 1; leg <= kNumLegs; ++leg) {
      sum += j.col(full_column(leg, static_cast<FullParam>(k))).squaredNorm();
    }
    mu[k] = std::sqrt(sum);
  }
  return mu;
}

std::array<double, kThetaParamsPerLeg> orientation_indices(
    const Matrix3x18& j_thth) {
  std::array<double, kThetaParamsPerLeg> nu{};
  for (int r = 0; r < kThetaParamsPerLeg; ++r) {
    double sum = 0.0;
    for (int leg = 1; leg <= kNumLegs; ++leg) {
      sum += j_thth.col(theta_column(leg, static_cast<ThetaParam>(r))).squaredNorm();
    }
    nu[r] = std::sqrt(sum);
  }
  return nu;
}

Mat3 euler_xyz_rotation(double x, double y, double z) {
  const double cx = std::cos(x), sx = std::sin(x);
  const double cy = std::cos(y), sy = std::sin(y);
  const double cz = std::cos(z), sz = std::sin(z);
  Mat3 q;
  q << cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx,
       sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx,
       -sy,     cy * sx,                cy * cx;
  return q;
}

double rotation_angle(const Mat3& q) {
  const Vec3 axial(q(2, 1) - q(1, 2), q(0, 2) - q(2, 0), q(1, 0) - q(0, 1));
  const double cos_angle = std::clamp((q.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::atan2(0.5 * axial.norm(), cos_angle);
}

std::array<double, kThetaParamsPerLeg> orientation_index_global_rotation(
    const Matrix3x18& j_thth) {
  std::array<double, kThetaParamsPerLeg> out{};
  for (int r = 0; r < kThetaParamsPerLeg; ++r) {
    Vec3 axis_sums = Vec3::Zero();
    for (int leg = 1; leg <= kNumLegs; ++leg) {
      axis_sums += j_thth.col(theta_column(leg, static_cast<ThetaParam>(r)))
                       .cwiseAbs2();
    }
    const Vec3 angles = axis_sums.cwiseSqrt();
    if (!(angles.maxCoeff() < std::numbers::pi)) {
      throw std::invalid_argument(
          "per-axis orientation aggregate must be below pi");
    }
    out[r] = rotation_angle(euler_xyz_rotation(angles(0), angles(1), angles(2)));
  }
  return out;
}

DiffVecModel evaluate_diffvec(const Vec3& p, const MachineParams& params) {
  DiffVecModel m;
  m.point = p;
  m.legs = inverse_kinematics(p, params);
  m.D = build_D(m.legs, params.d);
  m.E = build_E(m.legs, params.d);
  m.F = build_F(m.legs);
  m.G = build_G(m.legs);
  m.H = build_H(m.legs, params);

  const Mat3 d_inv = checked_inverse(m.D);
  const Mat3 f_inv = checked_inverse(m.F);
  m.J_thth = d_inv * m.E;
  m.J_pp = f_inv * reduce_G(m.G);
  m.J_ptheta = f_inv * m.H * m.J_thth;
  m.J = assemble_J(m.J_pp, m.J_ptheta);
  m.mu = position_indices(m.J);
  m.nu = orientation_indices(m.J_thth);
  m.nu_alt = orientation_index_global_rotation(m.J_thth);
  return m;
}

Matrix3x18 orientation_jacobian(const Vec3& p, const MachineParams& params) {
  const LegStates legs = inverse_kinematics(p, params);
  return checked_inverse(build_D(legs, params.d)) * build_E(legs, params.d);
}

PositionJacobians position_jacobians(const Vec3& p,
                                     const MachineParams& params) {
  const LegStates legs = inverse_kinematics(p, params);
  const Matrix3x18 j_thth =
      checked_inverse(build_D(legs, params.d)) * build_E(legs, params.d);
  const Mat3 f_inv = checked_inverse(build_F(legs));
  return {f_inv * reduce_G(build_G(legs)),
          f_inv * build_H(legs, params) * j_thth};
}

Matrix3x33 assemble_J(const Vec3& p, const MachineParams& params) {
  const PositionJacobians pj = position_jacobians(p, params);
  return assemble_J(pj.pp, pj.ptheta);
}

}  // namespace pkmsens
