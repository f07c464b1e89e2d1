#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Leggett-Garg witness W = C(t1,t2) + C(t2,t3) - C(t1,t3) for three identical
static windows with equidistant completion times, its maximization over the
phases phibar_i and (alpha, theta) sweeps.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ramsey_lgi.config import OptimizerOpts, default_threads
from ramsey_lgi.errors import ArgumentError, BoundWarning, DomainError
from ramsey_lgi.pulses import SystemParams, integrate_schedule, static_schedule
from ramsey_lgi.ramsey import MeasurementSpec

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
QUANTUM_BOUND = 1.5
BOUND_SLACK = 1e-6

Phases = Tuple[float, float, float]


@dataclass(frozen=True)
class LgiPoint:
    """Maximal witness value at one (alpha, theta, nbar) cell."""
    alpha: float
    theta: float
    nbar: float
    w_max: float
    argmax_phases: Phases

    @property
    def violates(self) -> bool:
        return self.w_max > 1.0

    def as_row(self) -> List[float]:
        return [self.alpha, self.theta, self.nbar, self.w_max, *self.argmax_phases]


LGI_COLUMNS = ["alpha", "theta", "nbar", "w_max", "phi1", "phi2", "phi3"]


def _check(alpha: float, nbar: float) -> None:
    if not math.isfinite(alpha) or alpha < 0:
        raise ArgumentError(f"alpha must be >= 0, got {alpha!r}")
    if not math.isfinite(nbar) or nbar < 0:
        raise ArgumentError(f"nbar must be >= 0, got {nbar!r}")


def _two_time(alpha, theta, nbar, p1, p2, include_gamma: bool):
    # C for alpha_1 = alpha, alpha_2 = alpha e^{i theta} on a thermal state
    width = alpha ** 2 * (2.0 * nbar + 1.0)
    gamma = alpha ** 2 * np.sin(theta) if include_gamma else 0.0
    return 0.5 * (np.cos(p1 + p2 + gamma) * np.exp(-width * (1.0 + np.cos(theta)))
                  + np.cos(p1 - p2 - gamma) * np.exp(-width * (1.0 - np.cos(theta))))


def _witness(alpha, theta, nbar, p1, p2, p3, include_gamma: bool = True):
    return (_two_time(alpha, theta, nbar, p1, p2, include_gamma)
            + _two_time(alpha, theta, nbar, p2, p3, include_gamma)
            - _two_time(alpha, 2.0 * theta, nbar, p1, p3, include_gamma))


def lgi_w(alpha: float, theta: float, nbar: float, phases: Sequence[float],
          include_gamma: bool = True) -> float:
    """
    Witness value for given phases.

    ``include_gamma=False`` drops the phase gamma_ij = alpha^2 sin(theta_ij)
    from every correlator; what remains is the classical surrogate.
    """
    _check(alpha, nbar)
    p1, p2, p3 = (float(p) for p in phases)
    return float(_witness(alpha, theta, nbar, p1, p2, p3, include_gamma))


def _coarse_starts(alpha, theta, nbar, opts: OptimizerOpts, include_gamma: bool) -> np.ndarray:
    grid = TWO_PI * np.arange(opts.grid_resolution) / opts.grid_resolution
    p1, p2, p3 = np.meshgrid(grid, grid, grid, indexing="ij")
    values = _witness(alpha, theta, nbar, p1, p2, p3, include_gamma).ravel()
    p1, p2, p3 = p1.ravel(), p2.ravel(), p3.ravel()
    # highest W first, then lexicographically smallest phases
    order = np.lexsort((p3, p2, p1, -values))[:opts.n_starts]
    return np.stack([p1[order], p2[order], p3[order], values[order]], axis=1)


def maximize_w(alpha: float, theta: float, nbar: float,
               opts: Optional[OptimizerOpts] = None, include_gamma: bool = True) -> LgiPoint:
    """
    Maximize W over phibar_i in [0, 2 pi)^3.

    Coarse grid, then Nelder-Mead on -W from the best cells. Returned phases
    are wrapped into [0, 2 pi).
    """
    _check(alpha, nbar)
    opts = opts or OptimizerOpts()
    if opts.grid_resolution < 8:
        raise ArgumentError(f"grid resolution must be >= 8, got {opts.grid_resolution}")

    def objective(x):
        return -float(_witness(alpha, theta, nbar, x[0], x[1], x[2], include_gamma))

    starts = _coarse_starts(alpha, theta, nbar, opts, include_gamma)
    best_w = float(starts[0, 3])
    best_x = starts[0, :3].copy()
    for start in starts:
        result = minimize(
            objective, start[:3], method="Nelder-Mead",
            options={"xatol": opts.xatol, "fatol": opts.fatol, "maxiter": opts.max_iter},
        )
        value = -float(result.fun)
        if value > best_w:
            best_w, best_x = value, np.asarray(result.x, dtype=float)
    phases = tuple(float(p) for p in np.mod(best_x, TWO_PI))
    logger.debug("alpha=%g theta=%g nbar=%g -> w_max=%.12g", alpha, theta, nbar, best_w)
    if best_w > QUANTUM_BOUND + BOUND_SLACK:
        message = (f"w_max {best_w:.9f} exceeds {QUANTUM_BOUND} at "
                   f"alpha={alpha:g}, theta={theta:g}, nbar={nbar:g}")
        logger.warning(message)
        warnings.warn(message, BoundWarning, stacklevel=2)
    return LgiPoint(float(alpha), float(theta), float(nbar), best_w, phases)


def sweep(alphas: Sequence[float], thetas: Sequence[float], nbar: float,
          opts: Optional[OptimizerOpts] = None, threads: Optional[int] = None,
          include_gamma: bool = True) -> List[LgiPoint]:
    """maximize_w on every (alpha, theta) cell, alpha-major."""
    alphas = [float(a) for a in alphas]
    thetas = [float(t) for t in thetas]
    if not alphas or not thetas:
        raise ArgumentError("sweep grids must be non-empty")
    opts = opts or OptimizerOpts()
    cells = [(a, t) for a in alphas for t in thetas]
    workers = threads or default_threads()
    logger.info("lgi sweep: %d cells on %d threads", len(cells), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: maximize_w(c[0], c[1], nbar, opts, include_gamma), cells))


def small_alpha_law(alpha: float, theta: float, nbar: float) -> float:
    """Leading-order maximal W for |alpha| << 1: 1 + alpha^2 (|sin t - sin 2t| - 2 nbar - 1)."""
    return 1.0 + alpha ** 2 * (abs(math.sin(theta) - math.sin(2.0 * theta)) - 2.0 * nbar - 1.0)


def large_alpha_law(alpha: float, nbar: float) -> float:
    """W near theta = pi for |alpha| >> 1: 3/2 (1 - pi^2 (2 nbar + 1) / (4 alpha^2))."""
    if alpha <= 0:
        raise ArgumentError("large-alpha law needs alpha > 0")
    return 1.5 * (1.0 - math.pi ** 2 * (2.0 * nbar + 1.0) / (4.0 * alpha ** 2))


def large_alpha_point(alpha: float) -> Tuple[float, Phases]:
    """theta = pi - pi/(2 alpha^2) with phibar_1 + phibar_2 = -pi/2 and phibar_3 = phibar_1."""
    if alpha <= 0:
        raise ArgumentError("large-alpha point needs alpha > 0")
    quarter = -0.25 * math.pi
    return math.pi - math.pi / (2.0 * alpha ** 2), (quarter, quarter, quarter)


def nbar_threshold(theta: float, alpha_small: float = 0.05,
                   opts: Optional[OptimizerOpts] = None, tol: float = 1e-6) -> float:
    """
    Largest nbar with w_max > 1 at small alpha, by bisection on [0, 1].

    Returns 0 when there is no violation even for the ground state.
    """
    if not (0.0 < alpha_small <= 0.1):
        raise DomainError(f"alpha_small must lie in (0, 0.1], got {alpha_small!r}")
    opts = opts or OptimizerOpts()

    def excess(nbar: float) -> float:
        return maximize_w(alpha_small, theta, nbar, opts).w_max - 1.0

    if excess(0.0) <= 0.0:
        return 0.0
    low, high = 0.0, 1.0
    if excess(high) > 0.0:
        logger.warning("violation persists at nbar=1 for theta=%g", theta)
        return high
    while high - low > tol:
        mid = 0.5 * (low + high)
        if excess(mid) > 0.0:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)


def identical_window_specs(alpha: float, theta: float, phases: Sequence[float],
                           omega: float = 1.0) -> Tuple[SystemParams, List[MeasurementSpec]]:
    """
    Three static windows whose kicks have |alpha_n| = alpha, successive
    rotation angle theta and phibar_n = phases[n].

    Windows last pi/omega with lambda = alpha omega / 2; completions are spaced
    by (theta mod 2 pi) + 2 pi over omega so that no two windows overlap.
    """
    if len(phases) != 3:
        raise ArgumentError("need three phases")
    params = SystemParams(omega, 0.5 * alpha * omega)
    tau = math.pi / omega
    record = integrate_schedule(params, static_schedule(tau))
    spacing = (math.fmod(theta, TWO_PI) % TWO_PI + TWO_PI) / omega
    specs = [
        MeasurementSpec.static(float(phases[n]) - record.phi_tot, tau, tau + n * spacing)
        for n in range(3)
    ]
    return params, specs
