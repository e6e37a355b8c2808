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

#include "pkmsens/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pkmsens/errors.hpp"
#include "pkmsens/linkage.hpp"
#include "pkmsens/monte_carlo.hpp"
#include "pkmsens/report.hpp"
#include "pkmsens/validation.hpp"

namespace pkmsens::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  unsigned threads = 0;

  std::optional<int> grid;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::vector<double> point;
  std::string out_path;
  std::string spec_path;
};

Config resolve_config(const Options& opt) {
  std::string path = opt.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("PKMSENS_CONFIG"); env != nullptr) path = env;
  }
  return path.empty() ? Config{} : Config::load(path);
}

fs::path output_path(const Config& cfg, const Options& opt, const char* fallback) {
  if (!opt.out_path.empty()) return opt.out_path;
  const fs::path dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  return dir / fallback;
}

Vec3 point_of(const std::vector<double>& v) {
  if (v.size() != 3) throw std::invalid_argument("--point expects x,y,z");
  return {v[0], v[1], v[2]};
}

void write_or_print(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
  } else {
    write_file(opt.out_path, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric error sensitivity of a three-leg translational PKM", "pkmsens"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path,
                 "JSON configuration file (default: $PKMSENS_CONFIG)");
  app.add_option("--threads", opt.threads, "Worker threads, 0 = hardware concurrency");

  auto* mean = app.add_subcommand("linkage-mean", "Mean |C| over the cubic workspace grid");
  mean->add_option("--grid", opt.grid, "Grid points per axis");
  mean->add_option("--out", opt.out_path, "Output CSV");

  auto* ldiag = app.add_subcommand("linkage-diagonal", "|C| along the Q1Q2 diagonal");
  ldiag->add_option("--samples", opt.samples, "Diagonal samples");
  ldiag->add_option("--out", opt.out_path, "Output CSV");

  auto* ddiag = app.add_subcommand("diffvec-diagonal", "mu and nu indices along the Q1Q2 diagonal");
  ddiag->add_option("--samples", opt.samples, "Diagonal samples");
  ddiag->add_option("--out", opt.out_path, "Output CSV");

  auto* at = app.add_subcommand("at", "All sensitivity matrices at one point");
  at->add_option("--point", opt.point, "x,y,z in mm")->delimiter(',')->required();
  at->add_option("--out", opt.out_path, "Output JSON (default: stdout)");

  auto* validate = app.add_subcommand("validate", "Compare analytic Jacobians with the FD oracles");
  validate->add_option("--seed", opt.seed, "Seed for the random points");
  validate->add_option("--points", opt.points, "Number of random points");
  validate->add_option("--out", opt.out_path, "Also write the JSON report here");

  auto* mc = app.add_subcommand("montecarlo", "Monte-Carlo tolerance propagation");
  mc->add_option("--spec", opt.spec_path, "Tolerance specification (JSON)")->required();
  mc->add_option("--samples", opt.samples, "Number of samples (default 10000)");
  mc->add_option("--seed", opt.seed, "Seed");
  mc->add_option("--point", opt.point, "x,y,z in mm (default 0,0,0)")->delimiter(',');
  mc->add_option("--out", opt.out_path, "Output JSON (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const Config cfg = resolve_config(opt);
    const MachineParams& params = cfg.machine;

    if (mean->parsed()) {
      const auto result = mean_sensitivity(opt.grid.value_or(cfg.grid_n), params, opt.threads);
      std::ostringstream csv;
      write_linkage_mean_csv(csv, result);
      const fs::path path = output_path(cfg, opt, "linkage_mean.csv");
      write_file(path, csv.str());
      out << "wrote " << path.string() << " (" << result.evaluated << " points, "
          << result.skipped << " skipped)\n";
    } else if (ldiag->parsed() || ddiag->parsed()) {
      const int n = opt.samples.value_or(cfg.diagonal_n);
      const bool linkage = ldiag->parsed();
      const SweepTable table = linkage ? linkage_diagonal_table(params, n, opt.threads)
                                       : diffvec_diagonal_table(params, n, opt.threads);
      std::ostringstream csv;
      write_diagonal_csv(csv, table);
      const fs::path path =
          output_path(cfg, opt, linkage ? "linkage_diagonal.csv" : "diffvec_diagonal.csv");
      write_file(path, csv.str());
      out << "wrote " << path.string() << " (" << table.rows.size() << " rows, "
          << table.skipped_count() << " skipped)\n";
    } else if (at->parsed()) {
      write_or_print(opt, at_json(point_of(opt.point), params).dump(2) + "\n", out);
    } else if (validate->parsed()) {
      ValidationOptions vo;
      vo.seed = opt.seed.value_or(cfg.seed);
      vo.random_points = opt.points.value_or(kDefaultValidationPoints);
      if (vo.random_points < 0) throw std::invalid_argument("--points must be >= 0");
      vo.h_length = cfg.fd_step_length;
      vo.h_angle = cfg.fd_step_angle;
      vo.threads = opt.threads;
      const ValidationReport report = run_validation(params, vo);
      out << "C       max relative error " << report.max_C << " (tol "
          << kLinkageTolerance << ")\n"
          << "J       max relative error " << report.max_J << " (tol "
          << kDiffVecTolerance << ")\n"
          << "J_thth  max relative error " << report.max_J_thth << " (tol "
          << kDiffVecTolerance << ")\n"
          << (report.passed() ? "PASS" : "FAIL") << '\n';
      if (!opt.out_path.empty()) write_file(opt.out_path, validation_json(report).dump(2) + "\n");
      return report.passed() ? kOk : kValidationFailed;
    } else if (mc->parsed()) {
      const ToleranceSpec spec = ToleranceSpec::parse(read_file(opt.spec_path));
      const int n = opt.samples.value_or(10000);
      if (n < 1) throw std::invalid_argument("--samples must be >= 1");
      const Vec3 p = opt.point.empty() ? Vec3::Zero() : point_of(opt.point);
      const MonteCarloReport report = monte_carlo(
          p, params, spec, static_cast<std::size_t>(n), opt.seed.value_or(cfg.seed), opt.threads);
      write_or_print(opt, to_json(report).dump(2) + "\n", out);
    }
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OutOfWorkspace& e) {
    err << "error: " << e.what() << '\n';
    return kOutOfWorkspace;
  } catch (const SingularConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kOutOfWorkspace;
  } catch (const EmptyGrid& e) {
    err << "error: " << e.what() << '\n';
    return kOutOfWorkspace;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailed;
  }
}

}  // namespace pkmsens::cli
