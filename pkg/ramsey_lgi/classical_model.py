#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Macrorealistic baseline: the qubit senses a classical oscillator
x_c(t) = A cos(w t + delta0) with Rayleigh-distributed amplitude and uniform
phase. Every measurement only adds the phase Phi_n = -sqrt(2) lam int f_- x_c,
so all correlations are averages of products of cosines over one joint law.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import j0

from ramsey_lgi.config import default_threads
from ramsey_lgi.errors import ArgumentError
from ramsey_lgi.ramsey import MeasurementSpec

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
SHARD_SIZE = 1 << 17
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ClassicalFieldParams:
    """Field variance <x_c^2> with the oscillator frequency and coupling."""
    variance: float
    omega: float
    lam: float

    def __post_init__(self):
        if not math.isfinite(self.variance) or self.variance < 0:
            raise ArgumentError(f"field variance must be >= 0, got {self.variance!r}")
        if self.omega <= 0:
            raise ArgumentError(f"omega must be > 0, got {self.omega!r}")

    def to_dict(self):
        return {"variance": self.variance, "omega": self.omega, "lambda": self.lam}


def variance_for_nbar(nbar: float) -> float:
    """Classical variance matching a thermal state: (2 nbar + 1) / 2."""
    return (2.0 * nbar + 1.0) / 2.0


def static_alpha_sq(tau: float, p: ClassicalFieldParams) -> float:
    """|alpha(tau)|^2 = (2 lam / w)^2 sin^2(w tau / 2)."""
    return (2.0 * p.lam / p.omega) ** 2 * math.sin(0.5 * p.omega * tau) ** 2


def classical_single(phi1: float, tau1: float, p: ClassicalFieldParams) -> float:
    return math.cos(phi1) * math.exp(-static_alpha_sq(tau1, p) * p.variance)


def _two_time(phi1, phi2, alpha_sq, theta, variance):
    scale = 2.0 * alpha_sq * variance
    return 0.5 * (np.cos(phi1 + phi2) * np.exp(-scale * (1.0 + np.cos(theta)))
                  + np.cos(phi1 - phi2) * np.exp(-scale * (1.0 - np.cos(theta))))


def classical_two_time(phi1: float, phi2: float, tau: float, theta: float,
                       p: ClassicalFieldParams) -> float:
    """Two identical static windows whose completion times differ by theta / w."""
    return float(_two_time(phi1, phi2, static_alpha_sq(tau, p), theta, p.variance))


def static_window_pair(phi1: float, phi2: float, theta: float, omega: float) -> List[MeasurementSpec]:
    """
    Two static windows of length pi/omega whose completion times differ by
    (theta mod 2 pi) + 2 pi over omega, so their Phi_n sinusoids are theta apart.
    """
    tau = math.pi / omega
    spacing = (theta % (2.0 * math.pi) + 2.0 * math.pi) / omega
    return [MeasurementSpec.static(phi1, tau, tau), MeasurementSpec.static(phi2, tau, tau + spacing)]


def classical_lgi_w(alpha_mag: float, theta: float, variance: float,
                    phases: Sequence[float]) -> float:
    """Witness combination of classical correlators; never above 1."""
    p1, p2, p3 = (float(x) for x in phases)
    alpha_sq = float(alpha_mag) ** 2
    return float(_two_time(p1, p2, alpha_sq, theta, variance)
                 + _two_time(p2, p3, alpha_sq, theta, variance)
                 - _two_time(p1, p3, alpha_sq, 2.0 * theta, variance))


def phase_averaged_two_time(phi1: float, phi2: float, a1: float, a2: float, theta: float) -> float:
    """
    Two-time correlator at fixed field amplitude, averaged over delta0 only.

    ``a1`` and ``a2`` are the amplitudes of Phi_1 and Phi_2 as sinusoids in
    delta0, ``theta`` their relative phase.
    """
    rel = cmath.exp(1j * theta)
    return 0.5 * (math.cos(phi1 + phi2) * float(j0(abs(a1 + a2 * rel)))
                  + math.cos(phi1 - phi2) * float(j0(abs(a1 - a2 * rel))))


def classical_accumulated_phase(spec: MeasurementSpec, amplitude, delta0,
                                p: ClassicalFieldParams):
    """
    Phi_n = -sqrt(2) lam int f_-(t) A cos(w t + delta0) dt over the window.

    ``amplitude`` and ``delta0`` may be arrays of equal shape.
    """
    amplitude = np.asarray(amplitude, dtype=float)
    delta0 = np.asarray(delta0, dtype=float)
    bounds = spec.t_start + spec.schedule.boundaries
    total = np.zeros(np.broadcast(amplitude, delta0).shape)
    for k, seg in enumerate(spec.schedule.segments):
        f_minus = seg.fe - seg.fg
        if f_minus == 0:
            continue
        total = total + f_minus * (np.sin(p.omega * bounds[k + 1] + delta0)
                                   - np.sin(p.omega * bounds[k] + delta0))
    return -(SQRT2 * p.lam / p.omega) * amplitude * total


def _shard(specs: Sequence[MeasurementSpec], p: ClassicalFieldParams,
           seed_seq: np.random.SeedSequence, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    u = rng.random(size)
    # inverse CDF of the Rayleigh law, <A^2> = 2 <x_c^2>
    amplitude = np.sqrt(-2.0 * p.variance * np.log1p(-u))
    delta0 = 2.0 * math.pi * rng.random(size)
    product = np.ones(size)
    for spec in specs:
        product *= np.cos(spec.phi + classical_accumulated_phase(spec, amplitude, delta0, p))
    return product


def monte_carlo_correlation(specs: Sequence[MeasurementSpec], p: ClassicalFieldParams,
                            n_samples: int, seed: int,
                            threads: Optional[int] = None) -> Tuple[float, float]:
    """
    Sample mean and standard error of prod_n cos(phi_n + Phi_n).

    One (A, delta0) draw per trajectory feeds every Phi_n. Shards have a fixed
    size and their own spawned stream, so the result depends on the seed only.
    """
    specs = list(specs)
    if not 1 <= len(specs) <= 3:
        raise ArgumentError(f"monte carlo correlation takes 1 to 3 measurements, got {len(specs)}")
    if n_samples < MIN_SAMPLES:
        raise ArgumentError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    sizes: List[int] = [SHARD_SIZE] * (n_samples // SHARD_SIZE)
    if n_samples % SHARD_SIZE:
        sizes.append(n_samples % SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    workers = threads or default_threads()
    logger.debug("monte carlo: %d samples in %d shards, seed %d", n_samples, len(sizes), seed)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        shards = list(pool.map(lambda job: _shard(specs, p, job[0], job[1]), zip(children, sizes)))
    values = np.concatenate(shards)
    mean = math.fsum(values) / n_samples
    variance = math.fsum((values - mean) ** 2) / (n_samples - 1)
    return mean, math.sqrt(variance / n_samples)
