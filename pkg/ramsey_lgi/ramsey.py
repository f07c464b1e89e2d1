#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Ramsey measurement layer.

Each measurement is reduced to a ``MeasurementKick``: the two branch
displacements in the interaction picture of the free oscillator
(alpha_{x,n} = alpha_x(tau_n) e^{i w t_n}) and the raw phase
phi_n + phi_{e,n} - phi_{g,n}. Correlations of any order are then sums of
displacement expectation values over the initial state.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ramsey_lgi.errors import ArgumentError, CapacityError, PreconditionError, UnsupportedStateError
from ramsey_lgi.phase_space import (
    Cat,
    Coherent,
    Ground,
    OscillatorState,
    Thermal,
    characteristic,
    compose_displacements,
    expect_displacement,
    modular_variable_expectation,
    state_from_dict,
    superposition_norm,
)
from ramsey_lgi.pulses import PulseSchedule, SystemParams, integrate_schedule, static_schedule

logger = logging.getLogger(__name__)

MAX_EXPANSION_ORDER = 20
UNDEFINED_PROBABILITY = 1e-14
COMMUTING_TOLERANCE = 1e-10
TIME_TOLERANCE = 1e-9
_CHUNK = 1 << 15


@dataclass(frozen=True)
class MeasurementSpec:
    """One Ramsey measurement: pulse phase, window length, completion time, schedule."""
    phi: float
    tau: float
    t_end: float
    schedule: PulseSchedule

    def __post_init__(self):
        duration = self.schedule.duration
        if abs(duration - self.tau) > TIME_TOLERANCE * max(1.0, abs(self.tau)):
            raise ArgumentError(f"tau {self.tau!r} differs from schedule duration {duration!r}")
        if self.t_end < self.tau - TIME_TOLERANCE * max(1.0, abs(self.tau)):
            raise ArgumentError(f"t_end {self.t_end!r} precedes the end of a window of length {self.tau!r}")

    @property
    def t_start(self) -> float:
        return self.t_end - self.tau

    @classmethod
    def static(cls, phi: float, tau: float, t_end: float, delta: float = 0.0) -> "MeasurementSpec":
        return cls(phi, tau, t_end, static_schedule(tau, delta))

    @classmethod
    def from_schedule(cls, phi: float, t_end: float, schedule: PulseSchedule) -> "MeasurementSpec":
        return cls(phi, schedule.duration, t_end, schedule)

    def to_dict(self) -> Dict[str, Any]:
        return {"phi": self.phi, "tau": self.tau, "t_end": self.t_end,
                "schedule": self.schedule.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MeasurementSpec":
        schedule = PulseSchedule.from_dict(data["schedule"])
        tau = float(data.get("tau", schedule.duration))
        return cls(float(data["phi"]), tau, float(data["t_end"]), schedule)


@dataclass(frozen=True)
class CorrelationRequest:
    """Ordered measurements on a given initial oscillator state."""
    specs: Tuple[MeasurementSpec, ...]
    initial: OscillatorState

    def __post_init__(self):
        specs = tuple(self.specs)
        object.__setattr__(self, "specs", specs)
        if not specs:
            raise ArgumentError("correlation request has no measurements")
        for prev, cur in zip(specs, specs[1:]):
            if cur.t_end <= prev.t_end:
                raise ArgumentError("measurement completion times must be strictly increasing")
            if cur.t_start < prev.t_end - TIME_TOLERANCE * max(1.0, abs(prev.t_end)):
                raise ArgumentError(
                    f"window ending at {cur.t_end!r} overlaps the window ending at {prev.t_end!r}"
                )

    def to_dict(self) -> Dict[str, Any]:
        return {"specs": [s.to_dict() for s in self.specs], "initial": self.initial.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CorrelationRequest":
        specs = tuple(MeasurementSpec.from_dict(s) for s in data["specs"])
        return cls(specs, state_from_dict(data["initial"]))


@dataclass(frozen=True)
class MeasurementKick:
    """Interaction-picture branch displacements and raw phase of one measurement."""
    alpha_e: complex
    alpha_g: complex
    phase: float

    @property
    def alpha(self) -> complex:
        return self.alpha_e - self.alpha_g

    @property
    def phibar(self) -> float:
        return self.phase - (self.alpha_g * self.alpha_e.conjugate()).imag


@dataclass(frozen=True)
class ConditionedOutcome:
    """Outcome probability and post-measurement cat (None when p < 1e-14)."""
    probability: float
    state: Optional[Cat]


def kick_for(spec: MeasurementSpec, params: SystemParams) -> MeasurementKick:
    record = integrate_schedule(params, spec.schedule)
    rotation = cmath.exp(1j * params.omega * spec.t_end)
    return MeasurementKick(
        record.alpha_e * rotation,
        record.alpha_g * rotation,
        spec.phi + record.phi_e - record.phi_g,
    )


def static_kick(alpha: complex, phibar: float) -> MeasurementKick:
    """Kick of a static-coupling window with given alpha_n and phibar_n."""
    return MeasurementKick(complex(alpha), 0j, float(phibar))


def single_expectation(state: OscillatorState, spec: MeasurementSpec, params: SystemParams) -> float:
    """<Z(t_1)> = Re{e^{i phibar_1} <D(alpha_1)>}."""
    kick = kick_for(spec, params)
    return modular_variable_expectation(state, kick.phibar, kick.alpha)


def outcome_probabilities(state: OscillatorState, spec: MeasurementSpec,
                          params: SystemParams) -> Tuple[float, float]:
    z = single_expectation(state, spec, params)
    return 0.5 * (1.0 + z), 0.5 * (1.0 - z)


def _components(state: OscillatorState) -> List[Tuple[complex, complex]]:
    if isinstance(state, Ground):
        return [(1.0 + 0j, 0j)]
    if isinstance(state, Coherent):
        return [(1.0 + 0j, state.amp)]
    if isinstance(state, Cat):
        return list(state.components)
    raise UnsupportedStateError(
        f"conditioning is defined for pure analytic states only, got {type(state).__name__}"
    )


def _apply_kraus(components, kick: MeasurementKick, sign: int) -> ConditionedOutcome:
    out: List[Tuple[complex, complex]] = []
    bright = cmath.exp(1j * kick.phase)
    for weight, amp in components:
        ground_phase = cmath.exp(1j * (kick.alpha_g * amp.conjugate()).imag)
        excited_phase = cmath.exp(1j * (kick.alpha_e * amp.conjugate()).imag)
        out.append((0.5 * weight * ground_phase, kick.alpha_g + amp))
        out.append((sign * 0.5 * weight * bright * excited_phase, kick.alpha_e + amp))
    weights = np.array([w for w, _ in out], dtype=complex)
    amps = np.array([b for _, b in out], dtype=complex)
    probability = min(max(superposition_norm(weights, amps), 0.0), 1.0)
    if probability < UNDEFINED_PROBABILITY:
        return ConditionedOutcome(probability, None)
    return ConditionedOutcome(probability, Cat.normalized(out))


def measure_conditioned(state: OscillatorState, spec: MeasurementSpec,
                        params: SystemParams) -> Tuple[ConditionedOutcome, ConditionedOutcome]:
    """
    Apply E_+ and E_- to a pure coherent-superposition state.

    The output cats carry twice the input component count. The common phase
    e^{i phi_g} of both Kraus operators is dropped.
    """
    components = _components(state)
    kick = kick_for(spec, params)
    return _apply_kraus(components, kick, +1), _apply_kraus(components, kick, -1)


def reconstruct_two_time(state: OscillatorState, first: MeasurementSpec, second: MeasurementSpec,
                         params: SystemParams) -> float:
    """<Z(t_2) Z(t_1)> = p_+ <Z_2>_+ - p_- <Z_2>_- from the conditioned cats."""
    plus, minus = measure_conditioned(state, first, params)
    total = 0.0
    if plus.state is not None:
        total += plus.probability * single_expectation(plus.state, second, params)
    if minus.state is not None:
        total -= minus.probability * single_expectation(minus.state, second, params)
    return total


def _fold(amps: np.ndarray, totals: np.ndarray, phases: np.ndarray) -> None:
    phases += np.imag(amps * np.conj(totals))
    totals += amps


def correlate_kicks(kicks: Sequence[MeasurementKick], state: OscillatorState) -> float:
    """
    Tr{Q_n ... Q_1 rho_0} by expanding the superoperator product into 2^n terms.

    Each term is a string of displacements on the left of rho and one on the
    right; both are composed with the left-fold rule and closed with
    Tr{D(bL) rho D^dag(bR)} = e^{-i Im(bR bL^*)} <D(bL - bR)>.
    """
    n = len(kicks)
    if n == 0:
        raise ArgumentError("need at least one measurement")
    if n > MAX_EXPANSION_ORDER:
        raise CapacityError(f"expansion order {n} exceeds the limit of {MAX_EXPANSION_ORDER}")
    alpha_e = np.array([k.alpha_e for k in kicks], dtype=complex)
    alpha_g = np.array([k.alpha_g for k in kicks], dtype=complex)
    phase = np.array([k.phase for k in kicks], dtype=float)

    n_terms = 1 << n
    parts: List[np.ndarray] = []
    residual = 0.0
    for start in range(0, n_terms, _CHUNK):
        index = np.arange(start, min(start + _CHUNK, n_terms), dtype=np.int64)
        left_total = np.zeros(index.size, dtype=complex)
        right_total = np.zeros(index.size, dtype=complex)
        left_phase = np.zeros(index.size)
        right_phase = np.zeros(index.size)
        term_phase = np.zeros(index.size)
        for k in range(n):
            # bit 0: e^{i psi} D(alpha_e) rho D^dag(alpha_g); bit 1: the conjugate partner
            flipped = ((index >> k) & 1).astype(bool)
            left = np.where(flipped, alpha_g[k], alpha_e[k])
            right = np.where(flipped, alpha_e[k], alpha_g[k])
            _fold(left, left_total, left_phase)
            _fold(right, right_total, right_phase)
            term_phase += np.where(flipped, -phase[k], phase[k])
        closing = np.imag(right_total * np.conj(left_total))
        values = np.exp(1j * (term_phase + left_phase - right_phase - closing)) \
            * characteristic(state, left_total - right_total)
        parts.append(values.real)
        residual = max(residual, float(np.abs(np.sum(values.imag))))
    if residual > 1e-9:
        logger.debug("correlation expansion left an imaginary residue of %.3e", residual)
    return math.fsum(np.concatenate(parts)) / n_terms


def correlation(request: CorrelationRequest, params: SystemParams) -> float:
    """n-time correlation <Z(t_n)...Z(t_1)> from the analytic expansion."""
    if len(request.specs) > MAX_EXPANSION_ORDER:
        raise CapacityError(
            f"{len(request.specs)} measurements exceed the limit of {MAX_EXPANSION_ORDER}"
        )
    kicks = [kick_for(spec, params) for spec in request.specs]
    return correlate_kicks(kicks, request.initial)


def two_time_closed_form(alpha1: complex, alpha2: complex, phibar1: float, phibar2: float,
                         state: OscillatorState, gamma: Optional[float] = None) -> float:
    """
    C = 1/2 [cos(pb1 + pb2 + gamma) <D(a1 + a2)> + cos(pb1 - pb2 - gamma) <D(a1 - a2)>]

    written with real parts so it also holds for states whose characteristic
    function is complex. ``gamma`` defaults to Im{a1^* a2}.
    """
    alpha1 = complex(alpha1)
    alpha2 = complex(alpha2)
    if gamma is None:
        gamma = (alpha1.conjugate() * alpha2).imag
    plus = cmath.exp(1j * (phibar1 + phibar2 + gamma)) * expect_displacement(state, alpha1 + alpha2)
    minus = cmath.exp(1j * (phibar1 - phibar2 - gamma)) * expect_displacement(state, alpha1 - alpha2)
    return 0.5 * (plus.real + minus.real)


def modulated_two_time(first: MeasurementSpec, second: MeasurementSpec,
                       state: OscillatorState, params: SystemParams) -> float:
    """
    Two-time correlator for modulated coupling.

    Same form as the static result with alpha = alpha_e - alpha_g, but
    gamma = Im{alpha_2 (alpha_{e,1} + alpha_{g,1})^*}.
    """
    k1 = kick_for(first, params)
    k2 = kick_for(second, params)
    gamma = (k2.alpha * (k1.alpha_e + k1.alpha_g).conjugate()).imag
    return two_time_closed_form(k1.alpha, k2.alpha, k1.phibar, k2.phibar, state, gamma=gamma)


def check_commuting(kicks: Sequence[MeasurementKick]) -> None:
    """Raise PreconditionError unless every displacement of different measurements commutes."""
    for i in range(len(kicks)):
        for j in range(i + 1, len(kicks)):
            for a in (kicks[i].alpha_e, kicks[i].alpha_g):
                for b in (kicks[j].alpha_e, kicks[j].alpha_g):
                    commutator = (a.conjugate() * b).imag
                    if abs(commutator) > COMMUTING_TOLERANCE:
                        raise PreconditionError(
                            f"displacements of measurements {i + 1} and {j + 1} do not commute "
                            f"(Im = {commutator:.3e})"
                        )


def three_point_commuting(specs: Sequence[MeasurementSpec], state: OscillatorState,
                          params: SystemParams) -> float:
    """
    <Z(t_3) Z(t_2) Z(t_1)> as Tr{Q_3 Q_2 Q_1 rho_0} with plain modular operators.

    Only valid when all displacements commute; then the product of the
    cosines expands into eight displacement expectations without extra phases.
    """
    if len(specs) != 3:
        raise ArgumentError(f"three_point_commuting needs exactly 3 measurements, got {len(specs)}")
    kicks = [kick_for(spec, params) for spec in specs]
    check_commuting(kicks)
    total = 0.0 + 0.0j
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                phase = s1 * kicks[0].phibar + s2 * kicks[1].phibar + s3 * kicks[2].phibar
                amp = s1 * kicks[0].alpha + s2 * kicks[1].alpha + s3 * kicks[2].alpha
                total += cmath.exp(1j * phase) * expect_displacement(state, amp)
    return total.real / 8.0
