from __future__ import annotations

import math

import numpy as np
import pytest

from ramsey_lgi.cli import main
from ramsey_lgi.pulses import SystemParams
from ramsey_lgi.ramsey import MeasurementSpec


@pytest.fixture
def params() -> SystemParams:
    """omega = 1, lambda = 0.5: a pi-long static window gives |alpha| = 1."""
    return SystemParams(1.0, 0.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


def make_static_spec(*, phi: float = 0.0, tau: float = math.pi,
                     t_end: float | None = None, delta: float = 0.0) -> MeasurementSpec:
    return MeasurementSpec.static(phi, tau, tau if t_end is None else t_end, delta)


@pytest.fixture
def static_spec():
    """Factory for static windows; defaults to a pi-long window ending at t = pi."""
    return make_static_spec


@pytest.fixture
def run_cli(tmp_path):
    """Run the command line with ``--output-dir`` pointing into tmp_path."""

    def run(*args: str) -> int:
        return main([*args, "--output-dir", str(tmp_path), "--threads", "2", "--quiet"])

    return run
