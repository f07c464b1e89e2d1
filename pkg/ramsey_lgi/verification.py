#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Analytic-vs-oracle verification suite run by ``python -m ramsey_lgi verify``.

Each check returns a ``CheckResult`` with the largest deviation it saw and
the tolerance it was held to. Random draws come from one seeded generator per
check, so a rerun with the same seed produces identical numbers.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from ramsey_lgi.classical_model import (
    ClassicalFieldParams,
    classical_lgi_w,
    classical_two_time,
    monte_carlo_correlation,
    static_window_pair,
    variance_for_nbar,
)
from ramsey_lgi.config import RunConfig
from ramsey_lgi.decoherence import BathParams, cat_wigner, decayed_closed_form
from ramsey_lgi.fock_oracle import (
    adequate_dim,
    conditional_amplitudes,
    density_from_state,
    kraus_completeness_error,
    kraus_measure,
    lindblad_propagate,
    oracle_correlate_kicks,
    oracle_correlation,
    request_dimension,
    wigner_displaced_parity,
)
from ramsey_lgi.lgi import identical_window_specs, lgi_w
from ramsey_lgi.output import GridSpec
from ramsey_lgi.phase_space import Cat, Ground, Thermal
from ramsey_lgi.pulses import (
    PulseSchedule,
    Segment,
    SystemParams,
    integrate_schedule,
    resonant_train,
    resonant_train_amplitude,
)
from ramsey_lgi.ramsey import CorrelationRequest, MeasurementSpec, correlation, static_kick

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["check", "cases", "max_abs_diff", "tolerance", "passed"]
VERIFY_NBARS = (0.0, 0.5, 1.0)
DECOHERENCE_DIM = 60
WIGNER_DIM = 80


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    max_abs_diff: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= self.tolerance

    def as_row(self) -> list:
        return [self.name, self.cases, self.max_abs_diff, self.tolerance, self.passed]


def _result(name: str, diffs: Sequence[float], tolerance: float) -> CheckResult:
    worst = max(diffs) if len(diffs) else 0.0
    result = CheckResult(name, len(diffs), float(worst), tolerance)
    log = logger.info if result.passed else logger.error
    log("%-22s %4d cases  max |diff| %.3e  (tol %.1e)", name, result.cases, worst, tolerance)
    return result


def check_kraus_completeness(seed: int, count: int = 200) -> List[CheckResult]:
    """Random static windows with |alpha| <= 3 on thermal states with nbar <= 2."""
    rng = np.random.default_rng(seed)
    completeness, normalization = [], []
    for _ in range(count):
        params = SystemParams(1.0, float(rng.uniform(0.0, 1.5)))
        tau = float(rng.uniform(0.1, 2.0 * math.pi))
        spec = MeasurementSpec.static(float(rng.uniform(0.0, 2.0 * math.pi)), tau, tau)
        state = Thermal(float(rng.uniform(0.0, 2.0)))
        dim = request_dimension(CorrelationRequest((spec,), state), params)
        completeness.append(kraus_completeness_error(spec, params, dim))
        outcome = kraus_measure(density_from_state(state, dim), spec, params)
        normalization.append(abs(outcome.p_plus + outcome.p_minus - 1.0))
    return [_result("kraus_completeness", completeness, 1e-10),
            _result("probability_sum", normalization, 1e-12)]


def check_engine_agreement(config: RunConfig) -> CheckResult:
    """ramsey.correlation against oracle_correlation for n = 1, 2, 3."""
    cases = [(float(a), float(t), nbar, n)
             for a in config.alpha_grid.values()
             for t in config.theta_grid.values()
             for nbar in VERIFY_NBARS
             for n in (1, 2, 3)]

    def one(case) -> float:
        alpha, theta, nbar, n = case
        params, specs = identical_window_specs(alpha, theta, config.phases, config.params.omega)
        request = CorrelationRequest(tuple(specs[:n]), Thermal(nbar))
        analytic = correlation(request, params)
        oracle = oracle_correlation(request, params, dim=config.dim)
        logger.debug("alpha=%g theta=%g nbar=%g n=%d: %.12f vs %.12f",
                     alpha, theta, nbar, n, analytic, oracle)
        return abs(analytic - oracle)

    with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
        diffs = list(pool.map(one, cases))
    return _result("analytic_vs_oracle", diffs, config.tol)


def check_amplification(max_pulses: int = 10, ratio: float = 0.1) -> List[CheckResult]:
    params = SystemParams(1.0, ratio)
    integrated, evolved = [], []
    for n_pulses in range(1, max_pulses + 1):
        schedule = resonant_train(params, n_pulses)
        expected = resonant_train_amplitude(params, n_pulses)
        record = integrate_schedule(params, schedule)
        integrated.append(abs(record.alpha_rel - expected))
        dim = adequate_dim(abs(record.alpha_e) + abs(record.alpha_g))
        amp_e, amp_g = conditional_amplitudes(params, schedule, dim)
        evolved.append(abs((amp_e - amp_g) - expected))
    return [_result("amplification_closed", integrated, 1e-10),
            _result("amplification_evolved", evolved, 1e-6)]


def random_two_level_schedule(rng: np.random.Generator, max_segments: int = 6) -> PulseSchedule:
    segments = []
    for _ in range(int(rng.integers(1, max_segments + 1))):
        fe = int(rng.integers(0, 2))
        segments.append(Segment(float(rng.uniform(0.05, 2.0)), fe, 1 - fe))
    return PulseSchedule(tuple(segments))


def check_sum_rule(seed: int, count: int = 100) -> CheckResult:
    """alpha_e + alpha_g = (lam / w)(e^{-i w T} - 1) for two-level schedules."""
    rng = np.random.default_rng(seed)
    diffs = []
    for _ in range(count):
        params = SystemParams(float(rng.uniform(0.5, 2.0)), float(rng.uniform(-1.0, 1.0)))
        schedule = random_two_level_schedule(rng)
        record = integrate_schedule(params, schedule)
        expected = (params.lam / params.omega) * (cmath.exp(-1j * params.omega * schedule.duration) - 1.0)
        diffs.append(abs(record.alpha_e + record.alpha_g - expected))
    return _result("two_level_sum_rule", diffs, 1e-12)


def check_classical_bound(seed: int, count: int = 10_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    excess = []
    for _ in range(count):
        w = classical_lgi_w(float(rng.uniform(0.0, 3.0)), float(rng.uniform(0.0, 2.0 * math.pi)),
                            float(rng.uniform(0.0, 5.0)), rng.uniform(0.0, 2.0 * math.pi, 3))
        excess.append(max(0.0, w - 1.0))
    return _result("classical_bound", excess, 1e-9)


def check_monte_carlo(config: RunConfig, n_seeds: int = 20, theta: float = 0.5 * math.pi,
                      phases=(0.3, -0.4)) -> CheckResult:
    """
    Monte Carlo two-time correlator against the closed form, one run per seed.

    Reports the number of seeds outside 3 sigma; at most two may miss.
    """
    alpha = config.alpha
    omega = config.params.omega
    field = ClassicalFieldParams(variance_for_nbar(config.nbar), omega, 0.5 * alpha * omega)
    specs = static_window_pair(phases[0], phases[1], theta, omega)
    expected = classical_two_time(phases[0], phases[1], specs[0].tau, theta, field)
    misses = 0
    for k in range(n_seeds):
        mean, stderr = monte_carlo_correlation(specs, field, config.samples, config.seed + k,
                                               config.worker_count)
        if abs(mean - expected) > 3.0 * stderr:
            misses += 1
    return _result("monte_carlo_3sigma_misses", [float(misses)], 2.0)


def check_gamma_ablation(seed: int, count: int = 1000) -> List[CheckResult]:
    """Without gamma the quantum witness is the classical one and stays below 1."""
    rng = np.random.default_rng(seed)
    identity, bound = [], []
    for _ in range(count):
        alpha = float(rng.uniform(0.0, 3.0))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        nbar = float(rng.uniform(0.0, 2.0))
        phases = rng.uniform(0.0, 2.0 * math.pi, 3)
        quantum = lgi_w(alpha, theta, nbar, phases, include_gamma=False)
        classical = classical_lgi_w(alpha, theta, variance_for_nbar(nbar), phases)
        identity.append(abs(quantum - classical))
        bound.append(max(0.0, quantum - 1.0))
    return [_result("gamma_ablation", identity, 1e-12),
            _result("ablated_bound", bound, 1e-9)]


def check_decoherence(config: RunConfig) -> List[CheckResult]:
    """
    Damped correlators and decohered cat Wigner functions against the Lindblad
    oracle at reduced cat amplitude.
    """
    params = SystemParams(config.params.omega, 0.0)
    gamma = 0.01 * params.omega
    alpha1 = 1.0 + 1.0j
    second_kicks = (alpha1, -alpha1, 0.5j * alpha1, 0.8 + 0j)
    half = abs(alpha1) + 2.0
    grid = (GridSpec(-half, half, 21), GridSpec(-half, half, 21))
    correlations, wigners = [], []
    for n_eq in (0.0, 1.0):
        bath = BathParams(gamma, n_eq)
        for exposure in (0.04, 0.08):
            dt = exposure / (gamma * max(n_eq, 1.0))
            rho = density_from_state(Ground(), config.dim or DECOHERENCE_DIM)
            for alpha2 in second_kicks:
                analytic = decayed_closed_form(alpha1, alpha2, 0.0, 0.0, Ground(), dt, bath)
                oracle = oracle_correlate_kicks(
                    [static_kick(alpha1, 0.0), static_kick(alpha2, 0.0)], rho, params, bath, [dt]
                )
                correlations.append(abs(analytic - oracle))
            cat = Cat.normalized([(1.0, 0j), (1.0, alpha1)])
            damped = lindblad_propagate(density_from_state(cat, WIGNER_DIM), dt, params, bath,
                                        rotating_frame=True)
            oracle_w = wigner_displaced_parity(damped, grid).values
            analytic_w = cat_wigner(alpha1, 0.0, None, dt, bath, grid).values
            wigners.append(float(np.max(np.abs(oracle_w - analytic_w))))
    return [_result("decayed_two_time", correlations, 1e-3),
            _result("decohered_wigner", wigners, 1e-3)]


def run_suite(config: RunConfig) -> List[CheckResult]:
    """Every check in a fixed order."""
    seed = config.seed
    stages: List[Callable[[], object]] = [
        lambda: check_kraus_completeness(seed),
        lambda: check_engine_agreement(config),
        lambda: check_amplification(),
        lambda: check_sum_rule(seed + 1),
        lambda: check_classical_bound(seed + 2),
        lambda: check_monte_carlo(config),
        lambda: check_gamma_ablation(seed + 3),
        lambda: check_decoherence(config),
    ]
    results: List[CheckResult] = []
    for stage in stages:
        out = stage()
        results.extend(out if isinstance(out, list) else [out])
    return results
