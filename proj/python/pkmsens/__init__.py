# Copyright 2026 The pkmsens Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Geometric error sensitivity of a three-leg translational PKM."""

import json as _json

from pkmsens import _core
from pkmsens._core import (
    ConfigError,
    EmptyGrid,
    Error,
    FlatParallelogram,
    IoError,
    MachineParams,
    NoConvergence,
    OutOfWorkspace,
    SingularConfiguration,
    diagonal_samples,
    evaluate_diffvec,
    fd_diffvec_jacobians,
    fd_linkage_sensitivity,
    format_double,
    forward_kinematics,
    grid_points,
    inverse_kinematics,
    is_reachable,
    mean_sensitivity,
    sensitivity_matrix,
)

__all__ = [
    "ConfigError",
    "EmptyGrid",
    "Error",
    "FlatParallelogram",
    "IoError",
    "MachineParams",
    "NoConvergence",
    "OutOfWorkspace",
    "SingularConfiguration",
    "diagonal_samples",
    "evaluate_diffvec",
    "fd_diffvec_jacobians",
    "fd_linkage_sensitivity",
    "format_double",
    "forward_kinematics",
    "grid_points",
    "inverse_kinematics",
    "is_reachable",
    "mean_sensitivity",
    "monte_carlo",
    "sensitivity_matrix",
    "validate",
]


def validate(params=None, seed=20260101, points=10):
    """Runs both finite-difference oracles and returns the report as a dict."""
    return _json.loads(_core.validate(params or MachineParams(), seed, points))


def monte_carlo(p, spec, n, seed, params=None, threads=1):
    """Monte-Carlo tolerance propagation; `spec` is a dict or a JSON string."""
    text = spec if isinstance(spec, str) else _json.dumps(spec)
    return _json.loads(
        _core.monte_carlo(p, text, n, seed, params or MachineParams(), threads))
