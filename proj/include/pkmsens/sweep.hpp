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

// Deterministic evaluation of per-point computations over the prescribed cube
// and the Q1Q2 diagonal.

#ifndef PKMSENS_SWEEP_HPP_
#define PKMSENS_SWEEP_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pkmsens/geometry.hpp"

namespace pkmsens {

// Runs fn(0) ... fn(n - 1) on up to `threads` workers (0 = hardware
// concurrency). Each index is visited exactly once; callers write results into
// pre-sized slots so the outcome is independent of scheduling. If any call
// throws, the exception from the lowest index is rethrown after all workers
// finish.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

// n^3 points uniformly covering [q1, q2] per axis, x varying slowest
// (lexicographic in the grid indices (i, j, k)). Requires n >= 2.
std::vector<Vec3> grid_points(int n, const MachineParams& params);

// n increasing values from q1.x to q2.x inclusive, with t = 0 inserted when
// it is not already a sample. Requires n >= 2.
std::vector<double> diagonal_samples(int n, const MachineParams& params = {});

std::vector<Vec3> diagonal_points(std::span<const double> t);

struct Column {
  std::string name;
  std::string unit;
};

struct SweepRow {
  Vec3 point = Vec3::Zero();
  std::vector<double> values;
};

struct SkippedPoint {
  std::size_t index = 0;  // position in the input point list
  Vec3 point = Vec3::Zero();
  std::string reason;
};

struct Extremum {
  std::size_t row = 0;
  double value = 0.0;
};

struct SweepTable {
  std::vector<Column> schema;
  std::vector<SweepRow> rows;
  std::vector<SkippedPoint> skipped;
  // One entry per schema column; first occurrence wins ties. NaNs are ignored.
  std::vector<Extremum> argmax;
  std::vector<Extremum> argmin;
  MachineParams params;
  std::string grid_spec;

  std::size_t skipped_count() const { return skipped.size(); }
  // Throws std::out_of_range for unknown names.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

using Evaluator = std::function<std::vector<double>(const Vec3&)>;

struct SweepOptions {
  unsigned threads = 1;
  MachineParams params;
  std::string grid_spec;
};

// Evaluates every point. Points whose evaluation throws pkmsens::Error are
// recorded in `skipped`; all other rows keep the input order. Throws
// std::logic_error if the evaluator returns a row whose length differs from
// the schema.
SweepTable sweep(std::span<const Vec3> points, const Evaluator& evaluator,
                 std::vector<Column> schema, const SweepOptions& options = {});

}  // namespace pkmsens

#endif  // PKMSENS_SWEEP_HPP_
