from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from ramsey_lgi import lgi
from ramsey_lgi.config import OptimizerOpts
from ramsey_lgi.errors import ArgumentError, BoundWarning, DomainError
from ramsey_lgi.lgi import (
    LGI_COLUMNS,
    identical_window_specs,
    large_alpha_law,
    large_alpha_point,
    lgi_w,
    maximize_w,
    nbar_threshold,
    small_alpha_law,
    sweep,
)
from ramsey_lgi.phase_space import Thermal
from ramsey_lgi.ramsey import CorrelationRequest, correlation

FAST = OptimizerOpts(grid_resolution=12, n_starts=2, xatol=1e-9, fatol=1e-12, max_iter=2000)
SMALL_ALPHA_PHASES = (math.pi, math.pi, 0.5 * math.pi)


def test_zero_alpha_never_violates():
    point = maximize_w(0.0, 1.0, 0.0, FAST)
    assert point.w_max == pytest.approx(1.0, abs=1e-9)
    assert not point.violates


@pytest.mark.parametrize("nbar", [0.0, 0.2])
def test_small_alpha_expansion_at_three_quarter_pi(nbar):
    theta = 0.75 * math.pi
    for alpha in (0.02, 0.05):
        w = lgi_w(alpha, theta, nbar, SMALL_ALPHA_PHASES)
        assert w == pytest.approx(1.0 + alpha ** 2 * (math.sqrt(0.5) - 2.0 * nbar), abs=20 * alpha ** 4)
        assert small_alpha_law(alpha, theta, nbar) == pytest.approx(w, abs=20 * alpha ** 4)


def test_small_alpha_slope_from_a_fit():
    theta = 0.75 * math.pi
    alphas = np.linspace(0.01, 0.05, 5)
    excess = [maximize_w(a, theta, 0.0, FAST).w_max - 1.0 for a in alphas]
    slope = np.polyfit(alphas ** 2, excess, 1)[0]
    assert slope == pytest.approx(math.sqrt(0.5), rel=0.02)


def test_large_alpha_point_follows_asymptote():
    alpha = 5.0
    theta, phases = large_alpha_point(alpha)
    w = lgi_w(alpha, theta, 0.0, phases)
    law = large_alpha_law(alpha, 0.0)
    assert law == pytest.approx(1.5 * (1.0 - math.pi ** 2 / 100.0))
    assert abs(w - law) / law < 0.02
    assert w <= 1.5 + 1e-6


def test_maximum_stays_below_quantum_bound():
    with warnings.catch_warnings():
        warnings.simplefilter("error", BoundWarning)
        point = maximize_w(3.0, math.pi - math.pi / 18.0, 0.0, FAST)
    assert 1.0 < point.w_max <= 1.5 + 1e-6
    assert all(0.0 <= p < 2.0 * math.pi for p in point.argmax_phases)
    assert lgi_w(point.alpha, point.theta, 0.0, point.argmax_phases) == pytest.approx(point.w_max)


def test_optimizer_reaches_the_large_alpha_value():
    point = maximize_w(5.0, math.pi - math.pi / 50.0, 0.0)
    assert point.w_max == pytest.approx(1.3520, rel=0.02)
    assert point.w_max <= 1.5 + 1e-6


def test_half_alpha_violates_at_three_quarter_pi():
    assert maximize_w(0.5, 0.75 * math.pi, 0.0).w_max > 1.0


@pytest.mark.parametrize("alpha,theta,nbar", [
    (0.5, 0.75 * math.pi, 0.0),
    (1.2, 2.0, 0.3),
    (2.5, math.pi - 0.2, 0.0),
    (0.8, 4.5, 1.0),
])
def test_finer_coarse_grid_never_lowers_the_maximum(alpha, theta, nbar):
    coarse = maximize_w(alpha, theta, nbar, OptimizerOpts(grid_resolution=12))
    fine = maximize_w(alpha, theta, nbar, OptimizerOpts(grid_resolution=24))
    assert fine.w_max >= coarse.w_max - 1e-9


def test_bound_warning_when_witness_exceeds_three_halves(monkeypatch):
    def inflated(alpha, theta, nbar, p1, p2, p3, include_gamma=True):
        return 1.6 + 0.0 * np.asarray(p1, dtype=float)

    monkeypatch.setattr(lgi, "_witness", inflated)
    with pytest.warns(BoundWarning):
        point = maximize_w(1.0, 1.0, 0.0, FAST)
    assert point.w_max == pytest.approx(1.6)


def test_dropping_gamma_removes_the_violation(rng):
    for _ in range(200):
        alpha = float(rng.uniform(0.0, 3.0))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        w = lgi_w(alpha, theta, float(rng.uniform(0.0, 2.0)), rng.uniform(0.0, 2.0 * math.pi, 3),
                  include_gamma=False)
        assert w <= 1.0 + 1e-9
    point = maximize_w(1.5, 2.4, 0.0, FAST, include_gamma=False)
    assert point.w_max <= 1.0 + 1e-9


def test_identical_windows_reproduce_the_witness():
    alpha, theta, nbar = 0.8, 1.1, 0.3
    phases = (0.3, 1.2, -0.5)
    params, specs = identical_window_specs(alpha, theta, phases)
    state = Thermal(nbar)

    def two_time(i, j):
        return correlation(CorrelationRequest((specs[i], specs[j]), state), params)

    witness = two_time(0, 1) + two_time(1, 2) - two_time(0, 2)
    assert witness == pytest.approx(lgi_w(alpha, theta, nbar, phases), abs=1e-10)


def test_identical_windows_do_not_overlap():
    _, specs = identical_window_specs(1.0, -0.5, (0.0, 0.0, 0.0), omega=2.0)
    for prev, cur in zip(specs, specs[1:]):
        assert cur.t_start >= prev.t_end


def test_sweep_is_alpha_major():
    points = sweep([0.5, 1.0], [0.5, 2.0, 3.0], 0.0, FAST, threads=2)
    assert [(p.alpha, p.theta) for p in points] == [
        (0.5, 0.5), (0.5, 2.0), (0.5, 3.0), (1.0, 0.5), (1.0, 2.0), (1.0, 3.0)
    ]
    assert len(points[0].as_row()) == len(LGI_COLUMNS)
    with pytest.raises(ArgumentError):
        sweep([], [1.0], 0.0, FAST)


def test_sweep_matches_single_cell_maximization():
    point = sweep([1.2], [2.5], 0.1, FAST, threads=1)[0]
    assert point.w_max == pytest.approx(maximize_w(1.2, 2.5, 0.1, FAST).w_max)


def test_thermal_threshold_at_three_quarter_pi():
    threshold = nbar_threshold(0.75 * math.pi, 0.05, FAST, tol=1e-3)
    assert threshold == pytest.approx(math.sqrt(2.0) / 4.0, abs=0.01)


def test_threshold_is_zero_without_violation():
    assert nbar_threshold(0.0, 0.05, FAST, tol=1e-3) == 0.0


def test_threshold_is_symmetric_in_theta():
    below = nbar_threshold(0.75 * math.pi, 0.05, FAST, tol=1e-3)
    assert nbar_threshold(1.25 * math.pi, 0.05, FAST, tol=1e-3) == pytest.approx(below, abs=0.01)


def test_argument_validation():
    with pytest.raises(ArgumentError):
        lgi_w(-0.1, 0.0, 0.0, (0, 0, 0))
    with pytest.raises(ArgumentError):
        lgi_w(1.0, 0.0, -1.0, (0, 0, 0))
    with pytest.raises(ArgumentError):
        maximize_w(1.0, 1.0, 0.0, OptimizerOpts(grid_resolution=4))
    with pytest.raises(DomainError):
        nbar_threshold(1.0, alpha_small=0.5)
    with pytest.raises(DomainError):
        nbar_threshold(1.0, alpha_small=0.0)
    with pytest.raises(ArgumentError):
        identical_window_specs(1.0, 1.0, (0.0, 0.0))
