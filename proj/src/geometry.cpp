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

#include "pkmsens/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "pkmsens/errors.hpp"

namespace pkmsens {
namespace {

constexpr int kMaxNewtonIterations = 50;
constexpr double kResidualTolerance = 1e-10;  // mm^2
constexpr double kStepTolerance = 1e-9;       // mm

void check_leg(int leg) {
  if (leg < 1 || leg > kNumLegs) {
    throw std::invalid_argument("leg index must be in 1..3, got " +
                                std::to_string(leg));
  }
}

// Vector C_i - B_i of a leg for platform point p and joint displacement rho.
Vec3 leg_vector(const Vec3& p, const Vec3& axis, double rho, double a,
                double r) {
  return p - (rho - a + r) * axis;
}

bool in_working_region(const Vec3& p, const std::array<double, kNumLegs>& rho,
                       const MachineParams& params) {
  for (int i = 0; i < kNumLegs; ++i) {
    const Vec3 axis = rotation_matrix(i + 1).col(0);
    const Vec3 u = leg_vector(p, axis, rho[i], params.a[i], params.r[i]);
    const Vec3 off = u - u.dot(axis) * axis;
    if (params.L[i] * params.L[i] - off.squaredNorm() <= 0.0) return false;
    if (u.dot(axis) <= 0.0) return false;
  }
  return true;
}

}  // namespace

double condition_number(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  const Vec3 s = svd.singularValues();
  if (s(2) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(2);
}

Mat3 checked_inverse(const Mat3& m, double max_condition) {
  const double cond = condition_number(m);
  if (!(cond <= max_condition)) {
    throw SingularConfiguration("matrix condition number " +
                                std::to_string(cond) + " exceeds bound");
  }
  return m.inverse();
}

void MachineParams::validate() const {
  for (int i = 0; i < kNumLegs; ++i) {
    if (!(a[i] > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(L[i] > 0.0)) throw std::invalid_argument("L must be positive");
    if (!(r[i] >= 0.0)) throw std::invalid_argument("r must be non-negative");
  }
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (!(q1.array() <= q2.array()).all()) {
    throw std::invalid_argument("q1 must be component-wise <= q2");
  }
}

Mat3 rotation_matrix(int leg) {
  check_leg(leg);
  Mat3 r;
  switch (leg) {
    case 1:
      r.setIdentity();
      break;
    case 2:
      r << 0, 0, -1,
           1, 0, 0,
           0, -1, 0;
      break;
    default:
      r << 0, 1, 0,
           0, 0, 1,
           1, 0, 0;
      break;
  }
  return r;
}

LegStates inverse_kinematics(const Vec3& p, const MachineParams& params) {
  LegStates legs;
  for (int i = 0; i < kNumLegs; ++i) {
    const Vec3 axis = rotation_matrix(i + 1).col(0);
    const double along = p.dot(axis);
    const Vec3 off = p - along * axis;
    const double L = params.L[i];
    const double radicand = L * L - off.squaredNorm();
    if (!(radicand > 0.0)) {
      throw OutOfWorkspace(i + 1, "point unreachable by leg " +
                                      std::to_string(i + 1));
    }
    LegState& leg = legs[i];
    leg.leg_index = i + 1;
    leg.rho = along + params.a[i] - params.r[i] - std::sqrt(radicand);
    leg.b = (leg.rho - params.a[i]) * axis;
    leg.c = p - params.r[i] * axis;
    leg.w = (leg.c - leg.b) / L;
  }
  return legs;
}

bool is_reachable(const Vec3& p, const MachineParams& params) {
  for (int i = 0; i < kNumLegs; ++i) {
    const Vec3 axis = rotation_matrix(i + 1).col(0);
    const Vec3 off = p - p.dot(axis) * axis;
    if (!(params.L[i] * params.L[i] - off.squaredNorm() > 0.0)) return false;
  }
  return true;
}

Vec3 forward_kinematics(const std::array<double, kNumLegs>& rho,
                        const MachineParams& params, const Vec3& guess) {
  if (!in_working_region(guess, rho, params)) {
    throw OutOfWorkspace(0, "forward kinematics guess outside reachable set");
  }
  const auto residual = [&](const Vec3& p, Mat3* jac) {
    Vec3 f;
    for (int i = 0; i < kNumLegs; ++i) {
      const Vec3 axis = rotation_matrix(i + 1).col(0);
      const Vec3 u = leg_vector(p, axis, rho[i], params.a[i], params.r[i]);
      f(i) = u.squaredNorm() - params.L[i] * params.L[i];
      if (jac != nullptr) jac->row(i) = 2.0 * u.transpose();
    }
    return f;
  };

  Vec3 p = guess;
  Mat3 jac;
  Vec3 f = residual(p, &jac);
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    const Eigen::FullPivLU<Mat3> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec3 step = -lu.solve(f);

    // Backtrack until the iterate stays in the working region and the
    // squared residual decreases.
    double t = 1.0;
    bool accepted = false;
    Vec3 trial;
    Vec3 f_trial;
    Mat3 jac_trial;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      trial = p + t * step;
      if (!in_working_region(trial, rho, params)) continue;
      f_trial = residual(trial, &jac_trial);
      if (f_trial.squaredNorm() < f.squaredNorm() ||
          f_trial.cwiseAbs().maxCoeff() <= kResidualTolerance) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    p = trial;
    f = f_trial;
    jac = jac_trial;
    if (f.cwiseAbs().maxCoeff() <= kResidualTolerance &&
        (t * step).norm() <= kStepTolerance) {
      return p;
    }
  }
  throw NoConvergence("forward kinematics did not converge");
}

}  // namespace pkmsens
