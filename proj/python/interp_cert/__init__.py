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

"""Interpretability certificates: delta/gamma evaluation of procedures."""

import json

from ._core import (
    ContextMismatchError,
    InterpCertError,
    InvalidCountError,
    IoError,
    LossMismatchError,
    ParseError,
    SpecValidationError,
    ZeroBaselineError,
    __version__,
    compare,
    compute_delta,
    compute_gamma,
    load_csv,
    load_idx,
    median_heuristic_bandwidth,
    mmd_greedy_select,
    random_prototype_select,
    render_table,
    stepwise_feature_select,
)
from . import _core


def certify(base_t, base_r, new_t, new_r, **kwargs):
    """Certificate for one procedure run, as a dict."""
    return json.loads(_core.certify(base_t, base_r, new_t, new_r, **kwargs))


def dominates(a, b):
    """'equal', 'first_dominates', 'second_dominates' or 'incomparable'."""
    return _core.dominates(json.dumps(a), json.dumps(b))


def equivalence_classes(certificates, alpha):
    return _core.equivalence_classes([json.dumps(c) for c in certificates], alpha)


def hasse_edges(certificates):
    return _core.hasse_edges([json.dumps(c) for c in certificates])


def evaluate(spec, out=None, jobs=1, seed=None):
    """Runs a spec file; writes the report when `out` is given. Returns the summary."""
    return json.loads(_core._evaluate(spec, out, jobs, seed))
