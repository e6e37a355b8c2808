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

#include "pkmsens/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "pkmsens/errors.hpp"

namespace pkmsens {
namespace {

using Real = long double;
using RVec3 = Eigen::Matrix<Real, 3, 1>;
using RMat3 = Eigen::Matrix<Real, 3, 3>;

constexpr int kMaxIterations = 50;
constexpr Real kStepTolerance = 1e-15L;
constexpr double kResidualTolerance = 1e-10;  // mm^2
constexpr double kMaxLengthVariation = 1.0;    // mm
constexpr double kMaxAngleVariation = 0.05;    // rad

RVec3 widen(const Vec3& v) { return v.cast<Real>(); }

// v + theta x v, the linearized rotation of v by theta.
RVec3 rotate_small(const RVec3& theta, const RVec3& v) {
  return v + theta.cross(v);
}

// Newton iteration with a central-difference Jacobian. The residuals handled
// here are quadratic in x, so the difference quotient is exact up to rounding
// and the step size only needs to be representable.
template <int N, typename Residual>
Eigen::Matrix<Real, N, 1> newton_solve(const Residual& residual,
                                       Eigen::Matrix<Real, N, 1> x,
                                       const char* what) {
  using VecN = Eigen::Matrix<Real, N, 1>;
  using MatN = Eigen::Matrix<Real, N, N>;
  constexpr Real kJacobianStep = 1e-3L;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const VecN f = residual(x);
    MatN jac;
    for (int k = 0; k < N; ++k) {
      VecN xp = x, xm = x;
      xp(k) += kJacobianStep;
      xm(k) -= kJacobianStep;
      jac.col(k) = (residual(xp) - residual(xm)) / (2 * kJacobianStep);
    }
    const Eigen::FullPivLU<MatN> lu(jac);
    if (!lu.isInvertible()) break;
    const VecN step = -lu.solve(f);
    if (!step.allFinite()) break;
    x += step;
    if (step.cwiseAbs().maxCoeff() <= kStepTolerance) {
      if (static_cast<double>(residual(x).cwiseAbs().maxCoeff()) <=
          kResidualTolerance) {
        return x;
      }
      break;
    }
  }
  throw NoConvergence(what);
}

// Rod-length closure of the perturbed chains around a fixed nominal pose.
class PerturbedClosure {
 public:
  PerturbedClosure(const std::array<double, kNumLegs>& rho,
                   const PerturbedLegInputs& inputs,
                   const MachineParams& params, const Vec3& nominal_point)
      : rho_(rho), inputs_(inputs), params_(params),
        p0_(widen(nominal_point)) {}

  Eigen::Matrix<Real, 6, 1> operator()(
      const Eigen::Matrix<Real, 6, 1>& x) const {
    const RVec3 dp = x.head<3>();
    const RVec3 dtheta = x.tail<3>();
    const RVec3 e1 = RVec3::UnitX();
    const RVec3 e2 = RVec3::UnitZ();
    const Real half_d = static_cast<Real>(params_.d) / 2;

    Eigen::Matrix<Real, 6, 1> out;
    for (int i = 0; i < kNumLegs; ++i) {
      const LegPerturbation& g = inputs_[i];
      const RMat3 r = rotation_matrix(i + 1).cast<Real>();
      const RVec3 a0(-static_cast<Real>(params_.a[i]), 0, 0);
      const RVec3 c0(-static_cast<Real>(params_.r[i]), 0, 0);
      const RVec3 theta_a = widen(g.theta_a);
      const Real stroke = static_cast<Real>(rho_[i]) + g.drho;

      // O -> A_i -> B_i
      const RVec3 a = r * (a0 + widen(g.da));
      const RVec3 b = a + r * (stroke * e1) + r * theta_a.cross(stroke * e1);
      // C_i from the platform
      const RVec3 p = p0_ + dp;
      const RVec3 c = p + rotate_small(dtheta, r * (c0 + widen(g.dc_pos)));

      for (int j = 0; j < 2; ++j) {
        const Real xi = (j == 0) ? 1 : -1;
        const RVec3 b_side =
            xi * (half_d + static_cast<Real>(g.db) / 2) *
            rotate_small(widen(g.theta_b), e2);
        const RVec3 bij = b + r * rotate_small(theta_a, b_side);
        const RVec3 c_side =
            xi * (half_d + static_cast<Real>(g.dc_len) / 2) *
            rotate_small(widen(g.theta_c), e2);
        const RVec3 cij = c + rotate_small(dtheta, r * c_side);
        const Real length = static_cast<Real>(params_.L[i]) +
                            static_cast<Real>(j == 0 ? g.dL1 : g.dL2);
        out(2 * i + j) = (cij - bij).squaredNorm() - length * length;
      }
    }
    return out;
  }

 private:
  std::array<double, kNumLegs> rho_;
  PerturbedLegInputs inputs_;
  MachineParams params_;
  RVec3 p0_;
};

void check_perturbation_bounds(const PerturbedLegInputs& inputs) {
  const auto length_ok = [](double v) {
    return std::abs(v) <= kMaxLengthVariation;
  };
  const auto angle_ok = [](const Vec3& v) {
    return v.cwiseAbs().maxCoeff() <= kMaxAngleVariation;
  };
  for (const LegPerturbation& g : inputs) {
    const bool ok = g.da.cwiseAbs().maxCoeff() <= kMaxLengthVariation &&
                    g.dc_pos.cwiseAbs().maxCoeff() <= kMaxLengthVariation &&
                    length_ok(g.drho) && length_ok(g.db) && length_ok(g.dL1) &&
                    length_ok(g.dL2) && length_ok(g.dc_len) &&
                    angle_ok(g.theta_a) && angle_ok(g.theta_b) &&
                    angle_ok(g.theta_c);
    if (!ok) {
      throw std::invalid_argument(
          "perturbation exceeds 1 mm / 0.05 rad validity range");
    }
  }
}

Eigen::Matrix<Real, 6, 1> solve_pose_wide(
    const std::array<double, kNumLegs>& rho, const PerturbedLegInputs& inputs,
    const MachineParams& params, const Vec3& nominal_point) {
  check_perturbation_bounds(inputs);
  const PerturbedClosure closure(rho, inputs, params, nominal_point);
  return newton_solve<6>(closure, Eigen::Matrix<Real, 6, 1>::Zero(),
                         "perturbed pose solve did not converge");
}

std::array<double, kNumLegs> rho_of(const LegStates& legs) {
  return {legs[0].rho, legs[1].rho, legs[2].rho};
}

}  // namespace

Matrix3x18 fd_linkage_sensitivity(const Vec3& p, const MachineParams& params,
                                  double h) {
  if (!(h >= 1e-8 && h <= 1e-3)) {
    throw std::invalid_argument("finite-difference step must be in [1e-8, 1e-3]");
  }
  using RDesign = Eigen::Matrix<Real, kLinkageParams, 1>;
  const RDesign q0 = nominal_design(p, params).cast<Real>();
  const RVec3 start = widen(p);
  const auto solve_p = [&](const RDesign& q) {
    return newton_solve<3>(
        [&](const RVec3& x) { return implicit_residuals<Real>(x, q); }, start,
        "perturbed linkage solve did not converge");
  };

  Matrix3x18 c;
  for (int j = 0; j < kLinkageParams; ++j) {
    RDesign qp = q0, qm = q0;
    qp(j) += h;
    qm(j) -= h;
    c.col(j) = ((solve_p(qp) - solve_p(qm)) / (2 * static_cast<Real>(h)))
                   .cast<double>();
  }
  return c;
}

FullParamVector reduce_perturbation(const PerturbedLegInputs& inputs) {
  FullParamVector eps = FullParamVector::Zero();
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    const LegPerturbation& g = inputs[leg - 1];
    const auto set = [&](FullParam p, double v) { eps(full_column(leg, p)) = v; };
    const Vec3 de = g.da + g.drho * Vec3::UnitX() - g.dc_pos;
    const Vec3 gamma = g.theta_b - g.theta_c;
    set(FullParam::kDL, 0.5 * (g.dL1 + g.dL2));
    set(FullParam::kDeX, de.x());
    set(FullParam::kDeY, de.y());
    set(FullParam::kDeZ, de.z());
    set(FullParam::kThetaAx, g.theta_a.x());
    set(FullParam::kThetaAy, g.theta_a.y());
    set(FullParam::kThetaAz, g.theta_a.z());
    set(FullParam::kDl, g.dL1 - g.dL2);
    set(FullParam::kDm, g.db - g.dc_len);
    set(FullParam::kGammaX, gamma.x());
    set(FullParam::kGammaY, gamma.y());
  }
  return eps;
}

PerturbedLegInputs encode_perturbation(const FullParamVector& eps) {
  PerturbedLegInputs inputs;
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    LegPerturbation& g = inputs[leg - 1];
    const auto get = [&](FullParam p) { return eps(full_column(leg, p)); };
    const double mean = get(FullParam::kDL);
    const double diff = get(FullParam::kDl);
    g.dL1 = mean + 0.5 * diff;
    g.dL2 = mean - 0.5 * diff;
    g.da = Vec3(get(FullParam::kDeX), get(FullParam::kDeY), get(FullParam::kDeZ));
    g.theta_a = Vec3(get(FullParam::kThetaAx), get(FullParam::kThetaAy),
                     get(FullParam::kThetaAz));
    g.db = get(FullParam::kDm);
    g.theta_b = Vec3(get(FullParam::kGammaX), get(FullParam::kGammaY), 0.0);
  }
  return inputs;
}

std::array<double, 6> closure_residuals(const PoseError& pose,
                                        const std::array<double, kNumLegs>& rho,
                                        const PerturbedLegInputs& inputs,
                                        const MachineParams& params) {
  const Vec3 p0 = forward_kinematics(rho, params);
  const PerturbedClosure closure(rho, inputs, params, p0);
  Eigen::Matrix<Real, 6, 1> x;
  x << widen(pose.dp), widen(pose.dtheta);
  const auto r = closure(x);
  std::array<double, 6> out{};
  for (int k = 0; k < 6; ++k) out[k] = static_cast<double>(r(k));
  return out;
}

PoseError solve_perturbed_pose(const std::array<double, kNumLegs>& rho,
                               const PerturbedLegInputs& inputs,
                               const MachineParams& params) {
  const Vec3 p0 = forward_kinematics(rho, params);
  const auto x = solve_pose_wide(rho, inputs, params, p0);
  return {x.head<3>().cast<double>(), x.tail<3>().cast<double>()};
}

bool is_angle_param(FullParam param) {
  switch (param) {
    case FullParam::kThetaAx:
    case FullParam::kThetaAy:
    case FullParam::kThetaAz:
    case FullParam::kGammaX:
    case FullParam::kGammaY:
      return true;
    default:
      return false;
  }
}

FdDiffVecJacobians fd_diffvec_jacobians(const Vec3& p,
                                        const MachineParams& params,
                                        double h_length, double h_angle) {
  const auto rho = rho_of(inverse_kinematics(p, params));
  const Vec3 p0 = forward_kinematics(rho, params, p);

  FdDiffVecJacobians out;
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    for (int k = 0; k < kFullParamsPerLeg; ++k) {
      const auto param = static_cast<FullParam>(k);
      const int col = full_column(leg, param);
      const double h = is_angle_param(param) ? h_angle : h_length;
      FullParamVector eps = FullParamVector::Zero();
      eps(col) = h;
      const auto plus = solve_pose_wide(rho, encode_perturbation(eps), params, p0);
      eps(col) = -h;
      const auto minus = solve_pose_wide(rho, encode_perturbation(eps), params, p0);
      const Eigen::Matrix<double, 6, 1> d =
          ((plus - minus) / (2 * static_cast<Real>(h))).cast<double>();
      out.J.col(col) = d.head<3>();
      out.J_orientation.col(col) = d.tail<3>();
      if (const auto t = to_theta_param(param)) {
        out.J_thth.col(theta_column(leg, *t)) = d.tail<3>();
      }
    }
  }
  return out;
}

}  // namespace pkmsens
