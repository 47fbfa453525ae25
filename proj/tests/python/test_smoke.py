# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import interp_cert as ic


def test_delta_and_gamma_arithmetic():
    assert abs(ic.compute_delta(103.64, 95.83, "mape_percent") - 0.925) <= 1e-3
    assert abs(ic.compute_gamma(0.10, 0.30, 0.12, 0.28) - 0.8) <= 1e-12
    assert ic.compute_gamma(0.2, 0.2, 0.1, 0.1) == 0.0
    assert ic.compute_gamma(0.2, 0.2, 0.1, 0.3) is None
    with pytest.raises(ic.ZeroBaselineError):
        ic.compute_delta(0.0, 0.1)


def test_certificates_order_and_classes():
    a = ic.certify(1.0, 1.0, 0.5, 0.95)
    b = ic.certify(1.0, 1.0, 0.9, 1.0)
    assert math.isclose(a["delta"], 0.5)
    assert ic.dominates(a, b) == "first_dominates"
    assert ic.hasse_edges([a, b]) == [(0, 1)]
    c = ic.certify(1.0, 1.0, 0.52, 0.97)
    assert ic.equivalence_classes([a, c], 0.05) == [[0, 1]]
    assert ic.equivalence_classes([a, c], 0.0) == [[0], [1]]
    with pytest.raises(ic.ContextMismatchError):
        ic.dominates(a, ic.certify(1.0, 1.0, 0.5, 0.5, loss="mape_percent"))


def test_prototype_selection():
    rng = np.random.default_rng(0)
    x = np.vstack([rng.normal(-10, 0.3, (10, 2)), rng.normal(10, 0.3, (10, 2))])
    picks = ic.mmd_greedy_select(x, 2, bandwidth=1.0)
    assert (picks[0] < 10) != (picks[1] < 10)
    assert sorted(ic.mmd_greedy_select(x, 20)) == list(range(20))
    assert ic.random_prototype_select(x, 5, seed=3) == ic.random_prototype_select(x, 5, seed=3)
    assert ic.median_heuristic_bandwidth(x) > 0
    with pytest.raises(ic.InvalidCountError):
        ic.mmd_greedy_select(x, 21)


def test_stepwise_finds_the_relevant_feature():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(200, 5))
    y = 3 * x[:, 3] + 0.1 * rng.normal(size=200)
    assert ic.stepwise_feature_select(x, y, 3)[0] == 3


def test_csv_loading_and_errors(tmp_path):
    good = tmp_path / "good.csv"
    good.write_text("a,b,y\n1,2,3\n4,5,6\n")
    x, y = ic.load_csv(good, "y")
    assert x.shape == (2, 2)
    assert list(y) == [3.0, 6.0]
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,y\n1,2,3\n4,oops,6\n")
    with pytest.raises(ic.ParseError, match="line 3, column 2"):
        ic.load_csv(bad, "y")
    with pytest.raises(ic.IoError):
        ic.load_csv(tmp_path / "missing.csv", "y")


def write_spec(tmp_path, procedures, robustness=None):
    rng = np.random.default_rng(2)
    rows = ["a,b,c,cost"]
    for _ in range(120):
        a, b, c = rng.normal(size=3)
        rows.append(f"{a},{b},{c},{50 + 3 * a + 2 * b + rng.normal()}")
    (tmp_path / "cost.csv").write_text("\n".join(rows) + "\n")
    spec = {
        "name": "smoke",
        "dataset": {"type": "csv", "path": "cost.csv", "target": "cost"},
        "split": {"train_fraction": 0.7},
        "target_model": {"kind": "LinearRegressor", "initial_features": 1},
        "procedures": procedures,
        "robustness": robustness or {"kind": "Identity"},
        "loss": "mape_percent",
        "seeds": [1, 2],
        "alpha": 0.05,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return path


def test_evaluate_identity_spec(tmp_path):
    spec = write_spec(tmp_path, [{"kind": "Identity"}, {"kind": "StepwiseFeatures", "m": 2}])
    summary = ic.evaluate(spec, out=tmp_path / "out", jobs=2)
    aggregated = {a["certificate"]["ids"]["procedure"]: a for a in summary["aggregated"]}
    assert aggregated["Identity"]["certificate"]["delta"] == 1.0
    assert aggregated["Identity"]["certificate"]["gamma"] == 0.0
    assert aggregated["StepwiseFeatures"]["certificate"]["delta"] < 1.0
    table = ic.render_table(tmp_path / "out")
    assert "Identity" in table and "MAPE" in table
    assert "StepwiseFeatures" in ic.compare([tmp_path / "out"], 0.05)


def test_invalid_spec_names_the_field(tmp_path):
    spec = write_spec(tmp_path, [{"kind": "MMDGreedy", "m": 3}])
    with pytest.raises(ic.SpecValidationError, match="procedures/0"):
        ic.evaluate(spec)
