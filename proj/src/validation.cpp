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

#include "pkmsens/validation.hpp"

#include <algorithm>
#include <cmath>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/linkage.hpp"
#include "pkmsens/oracle.hpp"
#include "pkmsens/random.hpp"
#include "pkmsens/sweep.hpp"

namespace pkmsens {

std::vector<Vec3> validation_points(const MachineParams& params,
                                    std::uint64_t seed, int n) {
  std::vector<Vec3> points{Vec3::Zero(), params.q1, params.q2};
  const Vec3 centre = params.cube_center();
  const double half = 0.9 * params.cube_half();
  for (int k = 0; k < n; ++k) {
    auto engine = substream(seed, static_cast<std::uint64_t>(k));
    Vec3 p;
    for (int m = 0; m < 3; ++m) p(m) = centre(m) + uniform_symmetric(engine, half);
    points.push_back(p);
  }
  return points;
}

double entrywise_relative_error(const Eigen::MatrixXd& analytic,
                                const Eigen::MatrixXd& oracle, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
      const double scale = std::max(std::abs(oracle(i, j)), floor);
      worst = std::max(worst, std::abs(analytic(i, j) - oracle(i, j)) / scale);
    }
  }
  return worst;
}

double columnwise_relative_error(const Eigen::MatrixXd& analytic,
                                 const Eigen::MatrixXd& oracle, double floor) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
    const double scale = std::max(analytic.col(j).cwiseAbs().maxCoeff(), floor);
    const double diff = (analytic.col(j) - oracle.col(j)).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

ValidationReport run_validation(const MachineParams& params,
                                const ValidationOptions& options) {
  const auto points = validation_points(params, options.seed, options.random_points);
  ValidationReport report;
  report.points.resize(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t k) {
    const Vec3& p = points[k];
    PointValidation& v = report.points[k];
    v.point = p;
    const Matrix3x18 c = sensitivity_matrix(p, params).coeffs;
    v.C = entrywise_relative_error(c, fd_linkage_sensitivity(p, params, options.h_length));
    const DiffVecModel model = evaluate_diffvec(p, params);
    const FdDiffVecJacobians fd =
        fd_diffvec_jacobians(p, params, options.h_length, options.h_angle);
    v.J = columnwise_relative_error(model.J, fd.J);
    v.J_thth = columnwise_relative_error(model.J_thth, fd.J_thth);
  });
  for (const auto& v : report.points) {
    report.max_C = std::max(report.max_C, v.C);
    report.max_J = std::max(report.max_J, v.J);
    report.max_J_thth = std::max(report.max_J_thth, v.J_thth);
  }
  return report;
}

}  // namespace pkmsens
