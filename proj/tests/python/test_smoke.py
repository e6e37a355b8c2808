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

import json
import math
import os
import subprocess

import numpy as np
import pytest

import pkmsens

SPEC = {"distribution": "normal", "dL": 1e-3, "de_x": 1e-3, "de_y": 1e-3, "de_z": 1e-3,
        "thA_x": 1e-6, "thA_y": 1e-6, "thA_z": 1e-6, "dl": 1e-3, "dm": 1e-3,
        "g_x": 1e-6, "g_y": 1e-6}


def test_isotropic_linkage():
    c = np.asarray(pkmsens.sensitivity_matrix([0.0, 0.0, 0.0]))
    assert c.shape == (3, 18)
    assert abs(abs(c[0, 0]) - 1.0) < 1e-9
    assert np.allclose(c[0, 0], -c[0, 3])


def test_diffvec_pattern_at_origin():
    d = pkmsens.evaluate_diffvec([0.0, 0.0, 0.0])
    mu = np.asarray(d["mu"])
    assert np.allclose(mu[:2], math.sqrt(3.0))
    assert np.all(mu[2:] == 0.0)
    assert np.asarray(d["J"]).shape == (3, 33)
    assert abs(d["nu"][0] - math.sqrt(3.0) / 80.0) < 1e-12


def test_validation_passes():
    report = pkmsens.validate(points=2)
    assert report["passed"]
    assert report["schema_version"] == 1


def test_out_of_workspace():
    with pytest.raises(pkmsens.OutOfWorkspace):
        pkmsens.sensitivity_matrix([1000.0, 0.0, 0.0])
    assert not pkmsens.is_reachable([1000.0, 0.0, 0.0])


def test_monte_carlo_deterministic():
    a = pkmsens.monte_carlo([0.0, 0.0, 0.0], SPEC, 500, 7)
    b = pkmsens.monte_carlo([0.0, 0.0, 0.0], json.dumps(SPEC), 500, 7, threads=3)
    assert a == b
    assert a["samples_accepted"] == 500
    with pytest.raises(pkmsens.ConfigError):
        pkmsens.monte_carlo([0.0, 0.0, 0.0], {"bogus": 1.0}, 10, 1)


def test_grid_points_shape():
    g = np.asarray(pkmsens.grid_points(4, pkmsens.MachineParams()))
    assert g.shape == (64, 3)
    assert np.allclose(g[0], [-73.21] * 3)


@pytest.mark.skipif("PKMSENS_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_at(tmp_path):
    out = tmp_path / "at.json"
    r = subprocess.run([os.environ["PKMSENS_CLI"], "at", "--point", "0,0,0", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert len(doc["mu"]) == 11
    bad = subprocess.run([os.environ["PKMSENS_CLI"], "at", "--point", "900,0,0"],
                         capture_output=True, text=True)
    assert bad.returncode == 4
