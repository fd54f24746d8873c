"""Bundled instance files.

Two small worked instances ship with the package, both with a genuine
relaxation gap:

* ``real_gap_instance`` -- two equality forms plus a norm bound whose
  relaxation attains value 1 while the original problem has no feasible
  point at all;
* ``complex_gap_instance`` -- four inequality forms whose relaxation
  value is strictly below the best rank-one value.
"""
from __future__ import annotations

import json
from importlib import resources

from .jsonio import instance_from_json
from .sdp import QcqpInstance


def fixture_text(name: str) -> str:
    """Raw JSON text of a bundled fixture (name without extension)."""
    return (resources.files("qcqp_tight") / "data"
            / f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> QcqpInstance:
    return instance_from_json(json.loads(fixture_text(name)))


def real_gap_instance() -> QcqpInstance:
    return load_fixture("real_gap_instance")


def complex_gap_instance() -> QcqpInstance:
    return load_fixture("complex_gap_instance")
