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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/errors.hpp"
#include "pkmsens/geometry.hpp"
#include "pkmsens/linkage.hpp"
#include "pkmsens/monte_carlo.hpp"
#include "pkmsens/oracle.hpp"
#include "pkmsens/report.hpp"
#include "pkmsens/sweep.hpp"
#include "pkmsens/validation.hpp"

namespace py = pybind11;
using namespace pkmsens;

namespace {

Eigen::MatrixXd points_matrix(const std::vector<Vec3>& points) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i];
  return m;
}

py::dict diffvec_dict(const DiffVecModel& m) {
  py::dict d;
  d["point"] = m.point;
  d["rho"] = std::array<double, 3>{m.legs[0].rho, m.legs[1].rho, m.legs[2].rho};
  d["D"] = m.D;
  d["E"] = Eigen::MatrixXd(m.E);
  d["F"] = m.F;
  d["G"] = Eigen::MatrixXd(m.G);
  d["H"] = m.H;
  d["J_thth"] = Eigen::MatrixXd(m.J_thth);
  d["J_pp"] = Eigen::MatrixXd(m.J_pp);
  d["J_ptheta"] = Eigen::MatrixXd(m.J_ptheta);
  d["J"] = Eigen::MatrixXd(m.J);
  d["mu"] = m.mu;
  d["nu"] = m.nu;
  d["nu_alt"] = m.nu_alt;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric error sensitivity of a three-leg translational PKM";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<OutOfWorkspace>(m, "OutOfWorkspace", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  auto singular = py::register_exception<SingularConfiguration>(m, "SingularConfiguration", base.ptr());
  py::register_exception<FlatParallelogram>(m, "FlatParallelogram", singular.ptr());
  py::register_exception<EmptyGrid>(m, "EmptyGrid", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<MachineParams>(m, "MachineParams")
      .def(py::init<>())
      .def_readwrite("a", &MachineParams::a)
      .def_readwrite("L", &MachineParams::L)
      .def_readwrite("r", &MachineParams::r)
      .def_readwrite("d", &MachineParams::d)
      .def_readwrite("q1", &MachineParams::q1)
      .def_readwrite("q2", &MachineParams::q2)
      .def("validate", &MachineParams::validate);

  m.def("inverse_kinematics", [](const Vec3& p, const MachineParams& params) {
    py::list out;
    for (const LegState& s : inverse_kinematics(p, params)) {
      py::dict d;
      d["leg"] = s.leg_index;
      d["rho"] = s.rho;
      d["w"] = s.w;
      d["b"] = s.b;
      d["c"] = s.c;
      out.append(d);
    }
    return out;
  }, py::arg("p"), py::arg("params") = MachineParams{});
  m.def("forward_kinematics", &forward_kinematics, py::arg("rho"),
        py::arg("params") = MachineParams{}, py::arg("guess") = Vec3::Zero());
  m.def("is_reachable", &is_reachable, py::arg("p"), py::arg("params") = MachineParams{});

  m.def("sensitivity_matrix", [](const Vec3& p, const MachineParams& params) {
    return Eigen::MatrixXd(sensitivity_matrix(p, params).coeffs);
  }, py::arg("p"), py::arg("params") = MachineParams{});
  m.def("fd_linkage_sensitivity", [](const Vec3& p, const MachineParams& params, double h) {
    return Eigen::MatrixXd(fd_linkage_sensitivity(p, params, h));
  }, py::arg("p"), py::arg("params") = MachineParams{}, py::arg("h") = kDefaultLengthStep);
  m.def("mean_sensitivity", [](int n, const MachineParams& params, unsigned threads) {
    return Eigen::MatrixXd(mean_sensitivity(n, params, threads).mean_abs);
  }, py::arg("grid_n"), py::arg("params") = MachineParams{}, py::arg("threads") = 0);

  m.def("evaluate_diffvec", [](const Vec3& p, const MachineParams& params) {
    return diffvec_dict(evaluate_diffvec(p, params));
  }, py::arg("p"), py::arg("params") = MachineParams{});
  m.def("fd_diffvec_jacobians", [](const Vec3& p, const MachineParams& params,
                                   double h_length, double h_angle) {
    const auto fd = fd_diffvec_jacobians(p, params, h_length, h_angle);
    py::dict d;
    d["J"] = Eigen::MatrixXd(fd.J);
    d["J_thth"] = Eigen::MatrixXd(fd.J_thth);
    return d;
  }, py::arg("p"), py::arg("params") = MachineParams{},
     py::arg("h_length") = kDefaultLengthStep, py::arg("h_angle") = kDefaultAngleStep);

  m.def("grid_points", [](int n, const MachineParams& params) {
    return points_matrix(grid_points(n, params));
  }, py::arg("n"), py::arg("params") = MachineParams{});
  m.def("diagonal_samples", &diagonal_samples, py::arg("n"),
        py::arg("params") = MachineParams{});

  m.def("validate", [](const MachineParams& params, std::uint64_t seed, int points) {
    ValidationOptions o;
    o.seed = seed;
    o.random_points = points;
    return validation_json(run_validation(params, o)).dump();
  }, py::arg("params") = MachineParams{}, py::arg("seed") = kDefaultSeed,
     py::arg("points") = kDefaultValidationPoints);

  m.def("monte_carlo", [](const Vec3& p, const std::string& spec, std::size_t n,
                          std::uint64_t seed, const MachineParams& params, unsigned threads) {
    py::gil_scoped_release release;
    return to_json(monte_carlo(p, params, ToleranceSpec::parse(spec), n, seed, threads)).dump();
  }, py::arg("p"), py::arg("spec"), py::arg("n"), py::arg("seed"),
     py::arg("params") = MachineParams{}, py::arg("threads") = 1);

  m.def("format_double", &format_double);
}
