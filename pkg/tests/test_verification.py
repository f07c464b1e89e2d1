from __future__ import annotations

import pytest

from ramsey_lgi.config import create_run_config
from ramsey_lgi.output import GridSpec
from ramsey_lgi.verification import (
    CHECK_COLUMNS,
    CheckResult,
    check_amplification,
    check_classical_bound,
    check_engine_agreement,
    check_gamma_ablation,
    check_kraus_completeness,
    check_sum_rule,
)


def test_check_result_row():
    result = CheckResult("sum_rule", 3, 2e-13, 1e-12)
    assert result.passed
    assert result.as_row() == ["sum_rule", 3, 2e-13, 1e-12, True]
    assert len(result.as_row()) == len(CHECK_COLUMNS)
    assert not CheckResult("sum_rule", 3, 2e-12, 1e-12).passed


def test_sum_rule_holds():
    result = check_sum_rule(seed=1, count=50)
    assert result.cases == 50
    assert result.passed


def test_classical_bound_holds():
    assert check_classical_bound(seed=2, count=300).passed


def test_gamma_ablation_holds():
    results = check_gamma_ablation(seed=3, count=100)
    assert [r.name for r in results] == ["gamma_ablation", "ablated_bound"]
    assert all(r.passed for r in results)


def test_amplification_holds():
    results = check_amplification(max_pulses=4)
    assert all(r.cases == 4 for r in results)
    assert all(r.passed for r in results)


def test_kraus_completeness_holds():
    assert all(r.passed for r in check_kraus_completeness(seed=4, count=5))


def test_engine_agreement_on_a_small_grid():
    config = create_run_config(alpha_grid=GridSpec.point(0.5), theta_grid=GridSpec.point(1.0),
                               dim=40, threads=2)
    result = check_engine_agreement(config)
    assert result.cases == 9
    assert result.max_abs_diff < 1e-8
