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

// Configuration ingestion and the CSV / JSON artefacts written by the CLI.

#ifndef PKMSENS_REPORT_HPP_
#define PKMSENS_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "pkmsens/geometry.hpp"
#include "pkmsens/linkage.hpp"
#include "pkmsens/sweep.hpp"
#include "pkmsens/validation.hpp"

namespace pkmsens {

struct Config {
  MachineParams machine;
  int grid_n = 21;
  int diagonal_n = 101;
  double fd_step_length = 1e-6;
  double fd_step_angle = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string output_dir = ".";

  // Overlays a flat JSON object on `base`. Keys: a, L, r (number or array of
  // three), d, grid_n, diagonal_n, fd_step_length, fd_step_angle, seed,
  // output_dir. Throws ConfigError on unknown keys or wrong types.
  static Config from_json(const nlohmann::json& doc, Config base);
  static Config from_json(const nlohmann::json& doc);
  // Throws IoError if the file cannot be read, ConfigError if it is invalid.
  static Config load(const std::filesystem::path& path, Config base);
  static Config load(const std::filesystem::path& path);
};

// Shortest decimal that round-trips to the same double, independent of locale.
std::string format_double(double x);

// Column names and units of the diagonal tables.
std::vector<Column> linkage_diagonal_schema();
std::vector<Column> diffvec_diagonal_schema();

SweepTable linkage_diagonal_table(const MachineParams& params, int samples,
                                  unsigned threads = 0);
SweepTable diffvec_diagonal_table(const MachineParams& params, int samples,
                                  unsigned threads = 0);

// Header t_mm followed by the schema; one line per row, LF terminated.
void write_diagonal_csv(std::ostream& out, const SweepTable& table);

// Header row,param_leg,param_name,mean_abs_coeff; 54 lines in row-major order.
void write_linkage_mean_csv(std::ostream& out, const MeanSensitivity& mean);

nlohmann::json matrix_json(const Eigen::MatrixXd& m);
nlohmann::json at_json(const Vec3& p, const MachineParams& params);
nlohmann::json validation_json(const ValidationReport& report);

// Writes `content` byte for byte. Throws IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace pkmsens

#endif  // PKMSENS_REPORT_HPP_
