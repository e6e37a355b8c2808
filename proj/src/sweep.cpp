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

#include "pkmsens/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "pkmsens/errors.hpp"

namespace pkmsens {

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Vec3> grid_points(int n, const MachineParams& params) {
  if (n < 2) throw std::invalid_argument("grid size must be >= 2");
  const auto axis_value = [&](int axis, int i) {
    const double lo = params.q1(axis);
    const double hi = params.q2(axis);
    if (i == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  };
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        points.emplace_back(axis_value(0, i), axis_value(1, j),
                            axis_value(2, k));
      }
    }
  }
  return points;
}

std::vector<double> diagonal_samples(int n, const MachineParams& params) {
  if (n < 2) throw std::invalid_argument("diagonal sample count must be >= 2");
  const double lo = params.q1.x();
  const double hi = params.q2.x();
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    t[i] = (i == n - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  if (lo <= 0.0 && hi >= 0.0 && std::find(t.begin(), t.end(), 0.0) == t.end()) {
    t.insert(std::upper_bound(t.begin(), t.end(), 0.0), 0.0);
  }
  return t;
}

std::vector<Vec3> diagonal_points(std::span<const double> t) {
  std::vector<Vec3> points;
  points.reserve(t.size());
  for (double v : t) points.push_back(diagonal_point(v));
  return points;
}

std::size_t SweepTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return i;
  }
  throw std::out_of_range("unknown sweep column: " + std::string(name));
}

std::vector<double> SweepTable::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.values[c]);
  return out;
}

SweepTable sweep(std::span<const Vec3> points, const Evaluator& evaluator,
                 std::vector<Column> schema, const SweepOptions& options) {
  struct Slot {
    std::optional<std::vector<double>> values;
    std::string failure;
  };
  std::vector<Slot> slots(points.size());
  const std::size_t width = schema.size();

  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    try {
      auto values = evaluator(points[i]);
      if (values.size() != width) {
        throw std::logic_error("evaluator row length does not match schema");
      }
      slots[i].values = std::move(values);
    } catch (const Error& e) {
      slots[i].failure = e.what();
    }
  });

  SweepTable table;
  table.schema = std::move(schema);
  table.params = options.params;
  table.grid_spec = options.grid_spec;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (slots[i].values) {
      table.rows.push_back({points[i], std::move(*slots[i].values)});
    } else {
      table.skipped.push_back({i, points[i], slots[i].failure});
    }
  }

  table.argmax.assign(width, {0, std::numeric_limits<double>::quiet_NaN()});
  table.argmin.assign(width, {0, std::numeric_limits<double>::quiet_NaN()});
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double v = table.rows[r].values[c];
      if (std::isnan(v)) continue;
      Extremum& hi = table.argmax[c];
      Extremum& lo = table.argmin[c];
      if (std::isnan(hi.value) || v > hi.value) hi = {r, v};
      if (std::isnan(lo.value) || v < lo.value) lo = {r, v};
    }
  }
  return table;
}

}  // namespace pkmsens
