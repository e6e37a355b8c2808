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

#include "pkmsens/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "pkmsens/diffvec.hpp"
#include "pkmsens/errors.hpp"
#include "pkmsens/oracle.hpp"

namespace pkmsens {
namespace {

std::array<double, kNumLegs> per_leg_value(const std::string& key,
                                           const nlohmann::json& v) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x, x};
  }
  if (v.is_array() && v.size() == kNumLegs &&
      std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_number(); })) {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }
  throw ConfigError("config key '" + key + "' must be a number or an array of 3 numbers");
}

double number_value(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int int_value(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

const char* kRowLabels[] = {"px", "py", "pz"};

std::string unit_for(FullParam p, bool orientation) {
  if (orientation) return is_angle_param(p) ? "rad/rad" : "rad/mm";
  return is_angle_param(p) ? "mm/rad" : "mm/mm";
}

}  // namespace

Config Config::from_json(const nlohmann::json& doc, Config base) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  Config c = std::move(base);
  for (const auto& [key, v] : doc.items()) {
    if (key == "a") {
      c.machine.a = per_leg_value(key, v);
    } else if (key == "L") {
      c.machine.L = per_leg_value(key, v);
    } else if (key == "r") {
      c.machine.r = per_leg_value(key, v);
    } else if (key == "d") {
      c.machine.d = number_value(key, v);
    } else if (key == "grid_n") {
      c.grid_n = int_value(key, v);
    } else if (key == "diagonal_n") {
      c.diagonal_n = int_value(key, v);
    } else if (key == "fd_step_length") {
      c.fd_step_length = number_value(key, v);
    } else if (key == "fd_step_angle") {
      c.fd_step_angle = number_value(key, v);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "output_dir") {
      if (!v.is_string()) throw ConfigError("config key 'output_dir' must be a string");
      c.output_dir = v.get<std::string>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  try {
    c.machine.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Config Config::load(const std::filesystem::path& path, Config base) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(doc, std::move(base));
}

Config Config::from_json(const nlohmann::json& doc) { return from_json(doc, Config{}); }

Config Config::load(const std::filesystem::path& path) { return load(path, Config{}); }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<Column> linkage_diagonal_schema() {
  std::vector<Column> schema;
  for (int m = 0; m < 3; ++m) {
    for (int leg = 1; leg <= kNumLegs; ++leg) {
      for (int k = 0; k < kLinkageParamsPerLeg; ++k) {
        schema.push_back({std::string("abs_") + kRowLabels[m] + "_" +
                              linkage_param_name(leg, static_cast<LinkageParam>(k)) +
                              "_" + std::to_string(leg),
                          "mm/mm"});
      }
    }
  }
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    for (int k = 0; k < kLinkageParamsPerLeg; ++k) {
      schema.push_back({"norm_" + linkage_param_name(leg, static_cast<LinkageParam>(k)) +
                            "_" + std::to_string(leg),
                        "mm/mm"});
    }
  }
  for (const char* row : kRowLabels) schema.push_back({std::string("global_") + row, "mm/mm"});
  schema.push_back({"total", "mm/mm"});
  return schema;
}

std::vector<Column> diffvec_diagonal_schema() {
  std::vector<Column> schema;
  for (int k = 0; k < kFullParamsPerLeg; ++k) {
    const auto p = static_cast<FullParam>(k);
    schema.push_back({"mu_" + std::string(full_param_name(p)), unit_for(p, false)});
  }
  for (int k = 0; k < kThetaParamsPerLeg; ++k) {
    const auto p = static_cast<ThetaParam>(k);
    const bool angle = p != ThetaParam::kDl && p != ThetaParam::kDm;
    schema.push_back({"nu_" + std::string(theta_param_name(p)), angle ? "rad/rad" : "rad/mm"});
  }
  for (int k = 0; k < kThetaParamsPerLeg; ++k) {
    const auto p = static_cast<ThetaParam>(k);
    const bool angle = p != ThetaParam::kDl && p != ThetaParam::kDm;
    schema.push_back({"nu_alt_" + std::to_string(k + 1), angle ? "rad/rad" : "rad/mm"});
  }
  return schema;
}

SweepTable linkage_diagonal_table(const MachineParams& params, int samples,
                                  unsigned threads) {
  const auto t = diagonal_samples(samples, params);
  const auto points = diagonal_points(t);
  const Evaluator eval = [&params](const Vec3& p) {
    const Matrix3x18 c = sensitivity_matrix(p, params).coeffs;
    std::vector<double> row;
    row.reserve(54 + 18 + 4);
    for (int m = 0; m < 3; ++m) {
      for (int j = 0; j < kLinkageParams; ++j) row.push_back(std::abs(c(m, j)));
    }
    for (int j = 0; j < kLinkageParams; ++j) row.push_back(c.col(j).norm());
    const GlobalSensitivity g = global_sensitivity(c);
    for (int m = 0; m < 3; ++m) row.push_back(g.row_norms(m));
    row.push_back(g.total);
    return row;
  };
  return sweep(points, eval, linkage_diagonal_schema(),
               {threads, params, "diagonal n=" + std::to_string(samples)});
}

SweepTable diffvec_diagonal_table(const MachineParams& params, int samples,
                                  unsigned threads) {
  const auto t = diagonal_samples(samples, params);
  const auto points = diagonal_points(t);
  const Evaluator eval = [&params](const Vec3& p) {
    const DiffVecModel m = evaluate_diffvec(p, params);
    std::vector<double> row(m.mu.begin(), m.mu.end());
    row.insert(row.end(), m.nu.begin(), m.nu.end());
    row.insert(row.end(), m.nu_alt.begin(), m.nu_alt.end());
    return row;
  };
  return sweep(points, eval, diffvec_diagonal_schema(),
               {threads, params, "diagonal n=" + std::to_string(samples)});
}

void write_diagonal_csv(std::ostream& out, const SweepTable& table) {
  out << "t_mm";
  for (const auto& c : table.schema) out << ',' << c.name;
  out << '\n';
  for (const auto& row : table.rows) {
    out << format_double(row.point.x());
    for (double v : row.values) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_linkage_mean_csv(std::ostream& out, const MeanSensitivity& mean) {
  out << "row,param_leg,param_name,mean_abs_coeff\n";
  for (int m = 0; m < 3; ++m) {
    for (int leg = 1; leg <= kNumLegs; ++leg) {
      for (int k = 0; k < kLinkageParamsPerLeg; ++k) {
        const auto param = static_cast<LinkageParam>(k);
        out << 'p' << "xyz"[m] << ',' << leg << ',' << linkage_param_name(leg, param)
            << ',' << format_double(mean.mean_abs(m, linkage_column(leg, param))) << '\n';
      }
    }
  }
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json at_json(const Vec3& p, const MachineParams& params) {
  const Matrix3x18 c = sensitivity_matrix(p, params).coeffs;
  const DiffVecModel m = evaluate_diffvec(p, params);
  return {
      {"schema_version", 1},
      {"point", {p.x(), p.y(), p.z()}},
      {"C", matrix_json(c)},
      {"J_thth", matrix_json(m.J_thth)},
      {"J_pp", matrix_json(m.J_pp)},
      {"J_ptheta", matrix_json(m.J_ptheta)},
      {"J", matrix_json(m.J)},
      {"mu", m.mu},
      {"nu", m.nu},
      {"nu_alt", m.nu_alt},
  };
}

nlohmann::json validation_json(const ValidationReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& v : report.points) {
    points.push_back({{"point", {v.point.x(), v.point.y(), v.point.z()}},
                      {"C", v.C},
                      {"J", v.J},
                      {"J_thth", v.J_thth}});
  }
  return {
      {"schema_version", 1},
      {"passed", report.passed()},
      {"tolerance", {{"C", kLinkageTolerance}, {"J", kDiffVecTolerance}, {"J_thth", kDiffVecTolerance}}},
      {"max_relative_error", {{"C", report.max_C}, {"J", report.max_J}, {"J_thth", report.max_J_thth}}},
      {"points", std::move(points)},
  };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

}  // namespace pkmsens
