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

#include "pkmsens/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "compensated_sum.hpp"
#include "pkmsens/errors.hpp"
#include "pkmsens/oracle.hpp"
#include "pkmsens/random.hpp"
#include "pkmsens/sweep.hpp"

namespace pkmsens {
namespace {

std::optional<FullParam> param_from_name(std::string_view name) {
  for (int k = 0; k < kFullParamsPerLeg; ++k) {
    const auto p = static_cast<FullParam>(k);
    if (full_param_name(p) == name) return p;
  }
  return std::nullopt;
}

ErrorStats summarize(const std::vector<double>& values) {
  ErrorStats s;
  if (values.empty()) return s;
  internal::CompensatedSum sum;
  for (double v : values) {
    sum.add(v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    internal::CompensatedSum sq;
    for (double v : values) sq.add((v - s.mean) * (v - s.mean));
    s.std = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
  }
  return s;
}

nlohmann::json stats_json(const ErrorStats& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"max", s.max}};
}

}  // namespace

std::string_view to_string(Distribution d) {
  return d == Distribution::kNormal ? "normal" : "uniform";
}

ToleranceSpec ToleranceSpec::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("tolerance spec must be a JSON object");
  ToleranceSpec spec;
  if (auto it = doc.find("distribution"); it != doc.end()) {
    if (*it == "normal") {
      spec.distribution = Distribution::kNormal;
    } else if (*it == "uniform") {
      spec.distribution = Distribution::kUniform;
    } else {
      throw ConfigError("distribution must be \"normal\" or \"uniform\"");
    }
  }

  const auto value_of = [](const std::string& key, const nlohmann::json& v) {
    if (!v.is_number()) throw ConfigError("tolerance '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ConfigError("tolerance '" + key + "' must be finite and >= 0");
    }
    return x;
  };

  // All-legs entries first so that per-leg entries override them.
  struct LegEntry {
    FullParam param;
    int leg;
    double value;
  };
  std::vector<LegEntry> per_leg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "distribution") continue;
    if (const auto p = param_from_name(key)) {
      const double x = value_of(key, v);
      for (int leg = 1; leg <= kNumLegs; ++leg) spec.scale(full_column(leg, *p)) = x;
      continue;
    }
    const auto sep = key.rfind('_');
    if (sep != std::string::npos && sep + 2 == key.size()) {
      const char c = key.back();
      const auto p = param_from_name(std::string_view(key).substr(0, sep));
      if (p && c >= '1' && c <= '3') {
        per_leg.push_back({*p, c - '0', value_of(key, v)});
        continue;
      }
    }
    throw ConfigError("unknown tolerance key '" + key + "'");
  }
  for (const auto& e : per_leg) spec.scale(full_column(e.leg, e.param)) = e.value;
  return spec;
}

ToleranceSpec ToleranceSpec::parse(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid tolerance JSON: ") + e.what());
  }
  return from_json(doc);
}

ToleranceSpec ToleranceSpec::uniform_scale(Distribution distribution,
                                           double length, double angle) {
  ToleranceSpec spec;
  spec.distribution = distribution;
  for (int leg = 1; leg <= kNumLegs; ++leg) {
    for (int k = 0; k < kFullParamsPerLeg; ++k) {
      const auto p = static_cast<FullParam>(k);
      spec.scale(full_column(leg, p)) = is_angle_param(p) ? angle : length;
    }
  }
  return spec;
}

FullParamVector sample_parameters(const ToleranceSpec& spec, std::uint64_t seed,
                                  std::uint64_t k) {
  auto engine = substream(seed, k);
  FullParamVector eps;
  for (int j = 0; j < kFullParams; ++j) {
    eps(j) = spec.distribution == Distribution::kNormal
                 ? spec.scale(j) * standard_normal(engine)
                 : uniform_symmetric(engine, spec.scale(j));
  }
  return eps;
}

MonteCarloReport monte_carlo(const Vec3& p, const MachineParams& params,
                             const ToleranceSpec& spec, std::size_t n,
                             std::uint64_t seed, unsigned threads) {
  if (n < 1) throw std::invalid_argument("Monte-Carlo sample count must be >= 1");

  const DiffVecModel model = evaluate_diffvec(p, params);
  const std::array<double, kNumLegs> rho{model.legs[0].rho, model.legs[1].rho,
                                         model.legs[2].rho};
  const PoseError reference = solve_perturbed_pose(rho, {}, params);

  struct Sample {
    bool ok = false;
    double dp = 0.0, dtheta = 0.0, dp_pred = 0.0, dtheta_pred = 0.0;
  };
  std::vector<Sample> samples(n);
  parallel_for(n, threads, [&](std::size_t k) {
    const FullParamVector eps = sample_parameters(spec, seed, k);
    Sample& s = samples[k];
    try {
      const PoseError pose =
          solve_perturbed_pose(rho, encode_perturbation(eps), params);
      s.dp = (pose.dp - reference.dp).norm();
      s.dtheta = (pose.dtheta - reference.dtheta).norm();
    } catch (const NoConvergence&) {
      return;
    } catch (const std::invalid_argument&) {
      return;
    }
    s.dp_pred = (model.J * eps).norm();
    s.dtheta_pred = (model.J_thth * theta_part(eps)).norm();
    s.ok = true;
  });

  std::vector<double> dp, dtheta, dp_pred, dtheta_pred;
  for (const Sample& s : samples) {
    if (!s.ok) continue;
    dp.push_back(s.dp);
    dtheta.push_back(s.dtheta);
    dp_pred.push_back(s.dp_pred);
    dtheta_pred.push_back(s.dtheta_pred);
  }

  MonteCarloReport report;
  report.point = p;
  report.seed = seed;
  report.distribution = spec.distribution;
  report.requested = n;
  report.accepted = dp.size();
  report.skipped = n - dp.size();
  report.sampled_dp = summarize(dp);
  report.sampled_dtheta = summarize(dtheta);
  report.predicted_dp = summarize(dp_pred);
  report.predicted_dtheta = summarize(dtheta_pred);
  return report;
}

nlohmann::json to_json(const MonteCarloReport& report) {
  const auto rel = [](double sampled, double predicted) {
    return predicted == 0.0 ? 0.0 : (sampled - predicted) / predicted;
  };
  return {
      {"schema_version", 1},
      {"point", {report.point.x(), report.point.y(), report.point.z()}},
      {"seed", report.seed},
      {"distribution", std::string(to_string(report.distribution))},
      {"samples_requested", report.requested},
      {"samples_accepted", report.accepted},
      {"samples_skipped", report.skipped},
      {"sampled",
       {{"dp_norm_mm", stats_json(report.sampled_dp)},
        {"dtheta_norm_rad", stats_json(report.sampled_dtheta)}}},
      {"predicted",
       {{"dp_norm_mm", stats_json(report.predicted_dp)},
        {"dtheta_norm_rad", stats_json(report.predicted_dtheta)}}},
      {"relative_difference",
       {{"dp_mean", rel(report.sampled_dp.mean, report.predicted_dp.mean)},
        {"dtheta_mean",
         rel(report.sampled_dtheta.mean, report.predicted_dtheta.mean)}}},
  };
}

}  // namespace pkmsens
